#include "gps/primes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>

#include "gps/errors.hpp"
#include "gps/parallel.hpp"

namespace gps::primes {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

Residue classify(uint64_t p) {
    if (p == 2) return Residue::two;
    return (p % 4 == 1) ? Residue::one_mod4 : Residue::three_mod4;
}

// Base primes <= limit by a plain odd-only sieve (limit here is ~sqrt of the
// real limit, so this stays tiny).
std::vector<uint32_t> base_primes(uint32_t limit) {
    std::vector<uint32_t> out;
    if (limit < 2) return out;
    out.push_back(2);
    std::vector<bool> comp((limit + 1) / 2, false);  // comp[i] ~ 2i+1
    for (uint32_t i = 1; 2 * i + 1 <= limit; ++i) {
        if (comp[i]) continue;
        uint64_t p = 2 * i + 1;
        out.push_back(static_cast<uint32_t>(p));
        for (uint64_t j = p * p; j <= limit; j += 2 * p) comp[(j - 1) / 2] = true;
    }
    return out;
}

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((__uint128_t)a * b % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

double ideal_angle(uint32_t a, uint32_t b) { return std::atan2(double(b), double(a)); }

double reduce_angle_quarter(double theta) {
    double t = std::fmod(theta, kHalfPi);
    if (t < 0) t += kHalfPi;
    if (t >= kHalfPi) t = 0.0;  // guard against fmod landing on the boundary
    return t;
}

void sieve_primes_stream(uint64_t limit, const std::function<void(const RationalPrime&)>& sink,
                         const SieveOptions& opt) {
    if (limit < 2) return;
    sink({2, Residue::two});
    if (limit < 3) return;

    uint32_t sq = static_cast<uint32_t>(std::sqrt(double(limit))) + 2;
    auto base = base_primes(sq);

    uint64_t seg_odds = opt.segment_odds;
    if (seg_odds < 1024) seg_odds = 1024;
    uint64_t need = base.size() * sizeof(uint64_t) + seg_odds;
    if (need > opt.memory_budget_bytes) {
        uint64_t suggested = opt.memory_budget_bytes > base.size() * sizeof(uint64_t)
                                 ? opt.memory_budget_bytes - base.size() * sizeof(uint64_t)
                                 : 0;
        throw resource_error("sieve memory budget exceeded; need segment of " +
                             std::to_string(seg_odds) + " odds, budget allows " +
                             std::to_string(suggested));
    }

    std::vector<uint8_t> seg(seg_odds);
    // next odd multiple of base[i] to cross off, as an odd-index
    std::vector<uint64_t> next(base.size(), 0);

    for (uint64_t lo = 3; lo <= limit; lo += 2 * seg_odds) {
        uint64_t hi = std::min(limit, lo + 2 * seg_odds - 2);  // inclusive, odd range
        uint64_t count = (hi - lo) / 2 + 1;
        std::memset(seg.data(), 0, count);
        for (std::size_t i = 1; i < base.size(); ++i) {  // skip 2
            uint64_t p = base[i];
            if (p * p > hi) break;
            uint64_t start;
            if (lo == 3 || next[i] == 0) {
                start = p * p;
                if (start < lo) {
                    uint64_t k = (lo + p - 1) / p;
                    if (k % 2 == 0) ++k;
                    start = k * p;
                }
            } else {
                start = next[i];
            }
            uint64_t j = start;
            for (; j <= hi; j += 2 * p) seg[(j - lo) / 2] = 1;
            next[i] = j;
        }
        for (uint64_t idx = 0; idx < count; ++idx) {
            if (!seg[idx]) {
                uint64_t p = lo + 2 * idx;
                sink({p, classify(p)});
            }
        }
    }
}

std::vector<RationalPrime> sieve_primes(uint64_t limit, const SieveOptions& opt) {
    std::vector<RationalPrime> out;
    if (limit >= 2) out.reserve(static_cast<std::size_t>(1.2 * double(limit) / std::log(double(limit) + 2) + 16));
    sieve_primes_stream(limit, [&](const RationalPrime& p) { out.push_back(p); }, opt);
    return out;
}

std::pair<uint32_t, uint32_t> two_square_decompose(uint64_t p) {
    if (p % 4 != 1) {
        throw domain_error("two_square_decompose: p = " + std::to_string(p) +
                           " is not 1 mod 4");
    }
    // x with x^2 = -1 (mod p): x = a^{(p-1)/4} for a quadratic nonresidue a.
    uint64_t x = 0;
    for (uint64_t a = 2; a < 1000; ++a) {
        uint64_t y = powmod(a, (p - 1) / 4, p);
        if (mulmod(y, y, p) == p - 1) {
            x = y;
            break;
        }
    }
    if (x == 0) {
        throw error("two_square_decompose: no sqrt(-1) mod " + std::to_string(p) +
                    " found; input is composite");
    }
    // Hermite-Serret descent: Euclid on (p, x); the first remainder below
    // sqrt(p) together with the next one gives a^2 + b^2 = p.
    uint64_t a = p, b = x;
    while (b * b > p) {
        uint64_t t = a % b;
        a = b;
        b = t;
    }
    uint64_t r = a % b;
    uint64_t hi = std::max(b, r), lofit = std::min(b, r);
    if (hi * hi + lofit * lofit != p) {
        throw error("two_square_decompose: descent failed for " + std::to_string(p));
    }
    return {static_cast<uint32_t>(hi), static_cast<uint32_t>(lofit)};
}

std::vector<SplitPrime> split_table(uint64_t X, const SieveOptions& opt) {
    std::vector<uint64_t> ps;
    sieve_primes_stream(X, [&](const RationalPrime& q) {
        if (q.residue == Residue::one_mod4) ps.push_back(q.p);
    }, opt);
    std::vector<SplitPrime> out(ps.size());
    ChunkGrid grid(ps.size(), 8192);
    parallel_for_chunks(grid.n_chunks, opt.workers, [&](std::size_t c) {
        for (std::size_t i = grid.begin(c); i < grid.end(c); ++i) {
            auto [a, b] = two_square_decompose(ps[i]);
            out[i] = {ps[i], a, b};
        }
    });
    return out;
}

// ---------------------------------------------------------------------------
// Cache: little-endian fixed-width records.
//   header: magic "GPSC" | u32 version | u64 X | u64 count
//   rows:   u64 p | u32 a | u32 b
// ---------------------------------------------------------------------------
namespace {
constexpr char kMagic[4] = {'G', 'P', 'S', 'C'};
constexpr uint32_t kVersion = 1;
}  // namespace

void cache_store(const std::string& path, uint64_t X, const std::vector<SplitPrime>& table) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw cache_error(cache_error::reason::io, "cache_store: cannot open " + path);
    uint64_t count = table.size();
    bool ok = std::fwrite(kMagic, 1, 4, f) == 4 &&
              std::fwrite(&kVersion, sizeof kVersion, 1, f) == 1 &&
              std::fwrite(&X, sizeof X, 1, f) == 1 &&
              std::fwrite(&count, sizeof count, 1, f) == 1;
    for (const auto& row : table) {
        if (!ok) break;
        ok = std::fwrite(&row.p, sizeof row.p, 1, f) == 1 &&
             std::fwrite(&row.a, sizeof row.a, 1, f) == 1 &&
             std::fwrite(&row.b, sizeof row.b, 1, f) == 1;
    }
    ok = (std::fclose(f) == 0) && ok;
    if (!ok) throw cache_error(cache_error::reason::io, "cache_store: write failed: " + path);
}

std::vector<SplitPrime> cache_load(const std::string& path, uint64_t X) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw cache_error(cache_error::reason::io, "cache_load: cannot open " + path);
    char magic[4];
    uint32_t version = 0;
    uint64_t file_x = 0, count = 0;
    if (std::fread(magic, 1, 4, f) != 4 || std::memcmp(magic, kMagic, 4) != 0) {
        std::fclose(f);
        throw cache_error(cache_error::reason::bad_magic, "cache_load: bad magic in " + path);
    }
    if (std::fread(&version, sizeof version, 1, f) != 1 || version != kVersion) {
        std::fclose(f);
        throw cache_error(cache_error::reason::bad_version,
                          "cache_load: unsupported version in " + path);
    }
    if (std::fread(&file_x, sizeof file_x, 1, f) != 1 ||
        std::fread(&count, sizeof count, 1, f) != 1) {
        std::fclose(f);
        throw cache_error(cache_error::reason::truncated, "cache_load: truncated header in " + path);
    }
    if (file_x != X) {
        std::fclose(f);
        throw cache_error(cache_error::reason::x_mismatch,
                          "cache_load: cache is for X=" + std::to_string(file_x) +
                              ", requested X=" + std::to_string(X));
    }
    std::vector<SplitPrime> out(count);
    for (auto& row : out) {
        if (std::fread(&row.p, sizeof row.p, 1, f) != 1 ||
            std::fread(&row.a, sizeof row.a, 1, f) != 1 ||
            std::fread(&row.b, sizeof row.b, 1, f) != 1) {
            std::fclose(f);
            throw cache_error(cache_error::reason::truncated,
                              "cache_load: truncated rows in " + path);
        }
    }
    std::fclose(f);
    return out;
}

// ---------------------------------------------------------------------------
// Ideal / weighted-term enumeration
// ---------------------------------------------------------------------------

std::vector<PrimeIdealRecord> enumerate_prime_ideals(uint64_t X,
                                                     const std::vector<SplitPrime>& table) {
    if (X < 2) throw domain_error("enumerate_prime_ideals: X must be >= 2");
    std::vector<PrimeIdealRecord> inert;
    uint64_t sq = static_cast<uint64_t>(std::sqrt(double(X)));
    while ((sq + 1) * (sq + 1) <= X) ++sq;
    while (sq * sq > X) --sq;
    sieve_primes_stream(sq, [&](const RationalPrime& q) {
        if (q.residue == Residue::three_mod4) {
            inert.push_back({q.p * q.p, 0.0, IdealClass::inert,
                             static_cast<uint32_t>(q.p), 0});
        }
    });

    std::vector<PrimeIdealRecord> out;
    out.reserve(2 * table.size() + inert.size() + 1);
    out.push_back({2, std::numbers::pi / 4.0, IdealClass::ramified, 1, 1});

    // merge split pairs (norm p) with inert records (norm q^2), both ascending
    std::size_t i = 0, j = 0;
    while (i < table.size() || j < inert.size()) {
        uint64_t ni = i < table.size() ? table[i].p : UINT64_MAX;
        uint64_t nj = j < inert.size() ? inert[j].norm : UINT64_MAX;
        if (ni <= nj) {
            const auto& sp = table[i++];
            double th = ideal_angle(sp.a, sp.b);  // a > b, so th < pi/4
            out.push_back({sp.p, th, IdealClass::split, sp.a, sp.b});
            out.push_back({sp.p, kHalfPi - th, IdealClass::split, sp.b, sp.a});
        } else {
            out.push_back(inert[j++]);
        }
    }
    return out;
}

std::vector<PrimeIdealRecord> enumerate_prime_ideals(uint64_t X, const SieveOptions& opt) {
    return enumerate_prime_ideals(X, split_table(X, opt));
}

std::vector<WeightedTerm> enumerate_weighted_terms(uint64_t X, double support_cap,
                                                   const std::vector<SplitPrime>& table) {
    if (X < 2) throw domain_error("enumerate_weighted_terms: X must be >= 2");
    if (support_cap <= 0) throw domain_error("enumerate_weighted_terms: support_cap must be > 0");
    double cap = support_cap * double(X);
    uint64_t nmax = static_cast<uint64_t>(cap);
    while (double(nmax + 1) <= cap) ++nmax;

    std::vector<WeightedTerm> out;
    out.reserve(2 * table.size() + (1u << 16));

    // base stream: split prime ideals r=1, ascending norm
    for (const auto& sp : table) {
        if (sp.p > nmax) break;
        double lp = std::log(double(sp.p));
        double th = ideal_angle(sp.a, sp.b);
        out.push_back({sp.p, lp, th, 1});
        out.push_back({sp.p, lp, kHalfPi - th, 1});
    }

    // everything else is sparse: collect then merge
    std::vector<WeightedTerm> extra;
    // ramified (1+i)^r: norm 2^r, angle r*pi/4 mod pi/2 (pi/4 for odd r, 0 even)
    {
        double l2 = std::log(2.0);
        uint32_t r = 1;
        for (uint64_t n = 2; n <= nmax; n *= 2, ++r) {
            extra.push_back({n, l2, (r % 2 == 1) ? std::numbers::pi / 4.0 : 0.0, r});
            if (n > nmax / 2) break;
        }
    }
    // inert (q)^j: norm q^{2j}, angle 0, weight log(q^2) = 2 log q
    {
        uint64_t sq = static_cast<uint64_t>(std::sqrt(cap)) + 2;
        sieve_primes_stream(sq, [&](const RationalPrime& q) {
            if (q.residue != Residue::three_mod4) return;
            __uint128_t n = (__uint128_t)q.p * q.p;
            if (n > nmax) return;
            double w = 2.0 * std::log(double(q.p));
            uint32_t j = 1;
            while (n <= nmax) {
                extra.push_back({static_cast<uint64_t>(n), w, 0.0, j});
                if (n > (__uint128_t)nmax / (q.p * q.p)) break;
                n *= (__uint128_t)q.p * q.p;
                ++j;
            }
        });
    }
    // split powers p^r, r >= 2: two ideals per prime, angles r*theta mod pi/2
    for (const auto& sp : table) {
        __uint128_t n = (__uint128_t)sp.p * sp.p;
        if (n > nmax) break;  // table ascending: no later p qualifies either
        double lp = std::log(double(sp.p));
        double th = ideal_angle(sp.a, sp.b);
        uint32_t r = 2;
        while (n <= nmax) {
            extra.push_back({static_cast<uint64_t>(n), lp,
                             reduce_angle_quarter(double(r) * th), r});
            extra.push_back({static_cast<uint64_t>(n), lp,
                             reduce_angle_quarter(double(r) * (kHalfPi - th)), r});
            if (n > (__uint128_t)nmax / sp.p) break;
            n *= sp.p;
            ++r;
        }
    }

    auto key = [](const WeightedTerm& t) { return std::pair<uint64_t, double>(t.norm, t.angle); };
    std::sort(extra.begin(), extra.end(),
              [&](const WeightedTerm& u, const WeightedTerm& v) { return key(u) < key(v); });
    std::vector<WeightedTerm> merged;
    merged.reserve(out.size() + extra.size());
    std::merge(out.begin(), out.end(), extra.begin(), extra.end(), std::back_inserter(merged),
               [&](const WeightedTerm& u, const WeightedTerm& v) { return key(u) < key(v); });
    return merged;
}

std::vector<WeightedTerm> enumerate_weighted_terms(uint64_t X, double support_cap,
                                                   const SieveOptions& opt) {
    double cap = support_cap * double(X);
    uint64_t lim = static_cast<uint64_t>(cap);
    return enumerate_weighted_terms(X, support_cap, split_table(lim, opt));
}

void export_ideals_csv(const std::string& path, const std::vector<PrimeIdealRecord>& ideals) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw error("export_ideals_csv: cannot open " + path);
    std::fprintf(f, "norm,angle,class,a,b\n");
    for (const auto& r : ideals) {
        const char* cls = r.cls == IdealClass::split    ? "split"
                          : r.cls == IdealClass::inert  ? "inert"
                                                        : "ramified";
        std::fprintf(f, "%llu,%.17g,%s,%u,%u\n", (unsigned long long)r.norm, r.angle, cls,
                     r.a, r.b);
    }
    std::fclose(f);
}

}  // namespace gps::primes
