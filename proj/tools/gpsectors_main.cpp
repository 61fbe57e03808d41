// gpsectors: variance of Gaussian-prime angles across sectors.
//
// Subcommands: sieve | constants | point | scan | verify | plotdata.
// Exit codes: 0 success, 2 config error, 3 numeric-tolerance failure,
// 4 resource error.
#include <chrono>
#include <cstdio>
#include <string>

#include "CLI11.hpp"

#include "gps/errors.hpp"
#include "gps/runner.hpp"

namespace {

int run(int argc, char** argv) {
    CLI::App app{"Gaussian-prime sector variance toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    double lambda_point = 0.0;
    std::string scan_csv, out_csv, out_svg;

    auto add_config = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "experiment config file")->required();
    };

    auto* sieve = app.add_subcommand("sieve", "build and cache the split-prime table");
    add_config(sieve);
    auto* constants = app.add_subcommand("constants", "compute the prediction constants");
    add_config(constants);
    auto* point = app.add_subcommand("point", "run a single lambda point");
    add_config(point);
    point->add_option("--lambda", lambda_point, "lambda = log K / log X")->required();
    auto* scan = app.add_subcommand("scan", "run the configured lambda/K grid");
    add_config(scan);
    auto* verify = app.add_subcommand("verify", "run the ratios-recipe verification suite");
    add_config(verify);
    auto* plotdata = app.add_subcommand("plotdata", "re-emit plot CSV (+SVG) from a scan CSV");
    plotdata->add_option("--scan", scan_csv, "input scan.csv")->required();
    plotdata->add_option("--out", out_csv, "output plot CSV")->required();
    plotdata->add_option("--svg", out_svg, "optional output SVG");

    CLI11_PARSE(app, argc, argv);

    auto t0 = std::chrono::steady_clock::now();
    if (sieve->parsed()) {
        gps::runner::cmd_sieve(gps::runner::parse_config_file(config_path));
    } else if (constants->parsed()) {
        auto cfg = gps::runner::parse_config_file(config_path);
        auto b = gps::runner::cmd_constants(cfg);
        std::printf("pair=%s C_phi=%.12g C'_phi=%.12g phi_half=%.12g\n", cfg.pair_name.c_str(),
                    b.C_phi, b.C_phi_prime, b.phi_half);
        std::printf("C_phi_zeta=%.12g (err<=%.2g) C_phi_L=%.12g (err<=%.2g) A'_phi=%.12g "
                    "(err<=%.2g)\n",
                    b.c_phi_zeta.value, b.c_phi_zeta.err_bound, b.c_phi_L.value,
                    b.c_phi_L.err_bound, b.a_phi_prime.value, b.a_phi_prime.err_bound);
        std::printf("kappa=%.12g K_phi=%.12g (via kappa: %.12g)\n", b.kappa, b.K_phi,
                    b.K_phi_from_kappa);
    } else if (point->parsed()) {
        auto cfg = gps::runner::parse_config_file(config_path);
        auto p = gps::runner::cmd_point(cfg, lambda_point);
        std::printf("lambda=%.6f K=%.0f var=%.8g (%s, tail<=%.3g)\n", p.lambda, p.K, p.var,
                    p.var_method.c_str(), p.var_tail);
        std::printf("mean_emp=%.8g mean_asym=%.8g ratio_emp=%.6f ratio_asym=%.6f\n", p.mean_emp,
                    p.mean_asym, p.ratio_emp, p.ratio_asym);
        std::printf("pred_rmt=%.6f pred_refined=%.6f\n", p.pred_rmt, p.pred_refined);
    } else if (scan->parsed()) {
        auto cfg = gps::runner::parse_config_file(config_path);
        auto rec = gps::runner::cmd_scan(cfg);
        std::printf("scan: %zu points written to %s/scan.csv\n", rec.points.size(),
                    cfg.output_dir.c_str());
    } else if (verify->parsed()) {
        auto cfg = gps::runner::parse_config_file(config_path);
        bool ok = gps::runner::cmd_verify(cfg);
        if (!ok) throw gps::numeric_error("verification suite failed", 0.0);
        std::printf("verify: all checks passed\n");
    } else if (plotdata->parsed()) {
        gps::runner::cmd_plotdata(scan_csv, out_csv, out_svg);
    }
    auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::fprintf(stderr, "[gpsectors] wall %.2fs\n", dt);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const gps::resource_error& e) {
        std::fprintf(stderr, "resource error: %s\n", e.what());
        return 4;
    } catch (const gps::numeric_error& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 3;
    } catch (const gps::cache_error& e) {
        std::fprintf(stderr, "cache error: %s\n", e.what());
        return 4;
    } catch (const gps::domain_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
