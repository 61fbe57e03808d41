#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace gps::primes {

enum class Residue : uint8_t { one_mod4, three_mod4, two };

struct RationalPrime {
    uint64_t p;
    Residue residue;
};

enum class IdealClass : uint8_t { split, inert, ramified };

// One prime ideal of Z[i], canonical generator a+bi in the first quadrant.
// Split ideals come in conjugate pairs with angles theta and pi/2 - theta.
// Angles are double-precision atan2(b, a): distinct ideal angles up to norm
// X differ by at least ~1/X, so even at X = 1e9 the gap (1e-9) is far above
// the ~1e-16 ulp scale at pi/2.
struct PrimeIdealRecord {
    uint64_t norm;
    double angle;  // in [0, pi/2)
    IdealClass cls;
    uint32_t a, b;
};

// One prime-power ideal with its von Mangoldt weight.
//   norm = N(p^r), weight = Lambda = log N(p), angle = r * theta_p mod pi/2.
struct WeightedTerm {
    uint64_t norm;
    double weight;
    double angle;
    uint32_t exponent;
};

struct SieveOptions {
    uint64_t segment_odds = uint64_t(1) << 20;  // odd numbers per segment
    uint64_t memory_budget_bytes = uint64_t(2) << 30;
    int workers = 0;  // 0 = hardware
};

// Primes <= limit, ascending, tagged with residue class. limit < 2 -> empty.
std::vector<RationalPrime> sieve_primes(uint64_t limit, const SieveOptions& opt = {});

// Streaming form: sink is called once per prime, in ascending order.
void sieve_primes_stream(uint64_t limit, const std::function<void(const RationalPrime&)>& sink,
                         const SieveOptions& opt = {});

// p = a^2 + b^2 with a > b > 0 for p == 1 (mod 4). Throws domain_error on a
// bad residue class and gps::error if no square root of -1 exists (meaning
// the input was not prime).
std::pair<uint32_t, uint32_t> two_square_decompose(uint64_t p);

// Split-prime table: one row (p, a, b) per rational prime p == 1 (mod 4) <= X.
struct SplitPrime {
    uint64_t p;
    uint32_t a, b;
};
std::vector<SplitPrime> split_table(uint64_t X, const SieveOptions& opt = {});

// Binary cache of the split table (the expensive part of a big run).
void cache_store(const std::string& path, uint64_t X, const std::vector<SplitPrime>& table);
std::vector<SplitPrime> cache_load(const std::string& path, uint64_t X);

// All prime ideals with norm <= X, ascending by (norm, angle).
std::vector<PrimeIdealRecord> enumerate_prime_ideals(uint64_t X, const SieveOptions& opt = {});
std::vector<PrimeIdealRecord> enumerate_prime_ideals(uint64_t X,
                                                     const std::vector<SplitPrime>& table);

// All prime-power ideals with norm <= support_cap * X, ascending by
// (norm, angle). weight = log N(p); angle reduced to [0, pi/2).
std::vector<WeightedTerm> enumerate_weighted_terms(uint64_t X, double support_cap,
                                                   const SieveOptions& opt = {});
std::vector<WeightedTerm> enumerate_weighted_terms(uint64_t X, double support_cap,
                                                   const std::vector<SplitPrime>& table);

// CSV export "norm,angle,class,a,b"; for debugging and external tooling.
void export_ideals_csv(const std::string& path, const std::vector<PrimeIdealRecord>& ideals);

double ideal_angle(uint32_t a, uint32_t b);            // atan2(b, a)
double reduce_angle_quarter(double theta);             // into [0, pi/2)

}  // namespace gps::primes
