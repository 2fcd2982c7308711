// ffpluq: benchmark, correctness-check and reduction-count harness for the
// Z/pZ PLUQ factorization variants.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ffpluq/ffpluq.hpp"

using namespace ffpluq;

namespace {

constexpr const char* kCsvHeader =
    "variant,n,m,p,rank_req,rank_found,k,threshold,workers,winograd,seconds,checksum,"
    "red_total,red_gemm,red_trsm,red_utrsm,red_base,predicted,status";

struct Config {
    std::string mode;
    std::string variant;
    usize n = 0;
    usize m = 0; // 0: square
    u64 p = 0;
    i64 rank = -1; // -1: full
    usize k = 8;
    usize threshold = 8;
    unsigned workers = 0;
    u64 seed = 42;
    std::string winograd = "off";
    std::string in_path;
    std::string out_path;
};

bool is_fullrank_variant(const std::string& v) {
    return v == "right" || v == "left" || v == "crout";
}

Looking looking_of(const std::string& v) {
    if (v == "right") return Looking::right;
    if (v == "left") return Looking::left;
    return Looking::crout;
}

RRVariant rr_of(const Config& c) {
    RRVariant v;
    v.k = c.k;
    v.threshold = c.threshold;
    if (c.variant == "base")
        v.kind = RRKind::base_crout;
    else if (c.variant == "slab-rec")
        v.kind = RRKind::slab_recursive;
    else if (c.variant == "tile-rec")
        v.kind = RRKind::tile_recursive;
    else if (c.variant == "slab-iter")
        v.kind = RRKind::slab_iterative;
    else
        v.kind = RRKind::tile_iterative;
    return v;
}

std::optional<u64> prediction(const Config& c, usize n, usize m, usize rank_req) {
    if (n != m || rank_req != n) return std::nullopt; // model covers full-rank square only
    try {
        if (is_fullrank_variant(c.variant)) {
            CountVariant v = c.variant == "right" ? CountVariant::right_looking
                             : c.variant == "left" ? CountVariant::left_looking
                                                   : CountVariant::crout;
            return predicted_count(v, n, c.k);
        }
        if (c.variant == "tile-rec" && c.threshold == 1)
            return predicted_count(CountVariant::tile_recursive, n);
        if (c.variant == "slab-rec" && c.threshold == 1)
            return predicted_count(CountVariant::slab_recursive, n);
    } catch (const std::exception&) {
        return std::nullopt;
    }
    return std::nullopt;
}

void append_csv(const Config& c, usize n, usize m, u64 p, usize rank_req, usize rank_found,
                double seconds, u64 chk, const RedLedger& led,
                const std::optional<u64>& predicted, const std::string& status) {
    if (c.out_path.empty()) return;
    const bool fresh =
        !std::filesystem::exists(c.out_path) || std::filesystem::file_size(c.out_path) == 0;
    std::ofstream f(c.out_path, std::ios::app);
    if (!f) throw BadFormat("cannot open " + c.out_path);
    if (fresh) f << kCsvHeader << '\n';
    char chkbuf[32];
    std::snprintf(chkbuf, sizeof(chkbuf), "%016llx", (unsigned long long)chk);
    f << c.variant << ',' << n << ',' << m << ',' << p << ',' << rank_req << ','
      << rank_found << ',' << c.k << ',' << c.threshold << ',' << c.workers << ','
      << c.winograd << ',' << seconds << ',' << chkbuf << ',' << led.csv() << ',';
    if (predicted) f << *predicted;
    f << ',' << status << '\n';
}

void emit_plot_script(const std::string& csv_path) {
    const std::string script = csv_path + ".plot.py";
    if (std::filesystem::exists(script)) return;
    std::ofstream f(script);
    f << "#!/usr/bin/env python3\n"
         "# Plot the bench CSV written next to this script: one curve per\n"
         "# variant, seconds (and effective Gflops) against workers or n.\n"
         "import csv, sys, collections\n"
         "import matplotlib\n"
         "matplotlib.use('Agg')\n"
         "import matplotlib.pyplot as plt\n"
         "\n"
         "path = sys.argv[1] if len(sys.argv) > 1 else "
      << '"' << csv_path << '"'
      << "\n"
         "rows = [r for r in csv.DictReader(open(path)) if r['status'] in ('ok', 'pass')]\n"
         "if not rows:\n"
         "    sys.exit('no usable rows in ' + path)\n"
         "xkey = 'workers' if len({r['workers'] for r in rows}) > 1 else 'n'\n"
         "series = collections.defaultdict(list)\n"
         "for r in rows:\n"
         "    n = float(r['n'])\n"
         "    gflops = 2 * n ** 3 / 3 / float(r['seconds']) / 1e9\n"
         "    series[r['variant']].append((float(r[xkey]), gflops))\n"
         "for name, pts in sorted(series.items()):\n"
         "    pts.sort()\n"
         "    plt.plot([x for x, _ in pts], [y for _, y in pts], marker='o', label=name)\n"
         "plt.xlabel(xkey)\n"
         "plt.ylabel('effective Gflops (2n^3/3)')\n"
         "plt.legend()\n"
         "plt.grid(True, alpha=0.3)\n"
         "out = path + '.png'\n"
         "plt.savefig(out, dpi=150, bbox_inches='tight')\n"
         "print('wrote', out)\n";
}

int run(const Config& cfg0) {
    Config cfg = cfg0;
    set_workers(cfg.workers);

    Mat A(0, 0, PrimeField(2));
    RankProfiles intended;
    bool have_intended = false;
    usize n, m, rank_req;
    if (!cfg.in_path.empty()) {
        A = read_zpm(cfg.in_path);
        n = A.rows();
        m = A.cols();
        rank_req = cfg.rank >= 0 ? usize(cfg.rank) : std::min(n, m);
    } else {
        if (cfg.n == 0) throw InvalidDim("--n is required without --in");
        if (cfg.p == 0) throw InvalidDim("--p is required without --in");
        n = cfg.n;
        m = cfg.m ? cfg.m : cfg.n;
        rank_req = cfg.rank >= 0 ? usize(cfg.rank) : std::min(n, m);
        PrimeField F(cfg.p);
        auto gen = generate_matrix(n, m, rank_req, F, cfg.seed);
        A = std::move(gen.A);
        intended = gen.intended;
        have_intended = true;
    }
    const u64 p = A.field().p;

    GemmPolicy pol;
    if (cfg.winograd == "on" && cfg.mode != "count") pol.winograd_levels = 31;
    if (cfg.mode == "count") cfg.winograd = "off"; // counting needs the classical cascade

    if (cfg.mode == "check" && std::max(n, m) > 512)
        throw InvalidDim("check mode is limited to n, m <= 512");
    if (is_fullrank_variant(cfg.variant) && n != m)
        throw InvalidDim("full-rank variants need a square matrix");

    Mat work = A;
    RedLedger led;
    PluqResult res;
    std::string status = "ok";
    double seconds = 0;
    try {
        LedgerScope ls(&led);
        const auto t0 = std::chrono::steady_clock::now();
        if (is_fullrank_variant(cfg.variant))
            res = pluq_fullrank(work.view(), {looking_of(cfg.variant), cfg.k}, pol,
                                cfg.workers);
        else
            res = pluq_rank_revealing(work.view(), rr_of(cfg), pol, cfg.workers);
        seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    } catch (const ZeroPivot& e) {
        status = std::string("zero-pivot@") + std::to_string(e.step);
    }

    const u64 chk = checksum(work.view());
    auto predicted = prediction(cfg, n, m, rank_req);
    int exit_code = 0;

    if (cfg.mode == "check") {
        bool pass = status == "ok";
        if (pass) {
            pass = reconstruct(work.view(), res) == A;
            if (!pass) status = "reconstruct-mismatch";
        }
        if (pass && res.rank_revealing) {
            auto prof = extract_profiles(res);
            const bool cols_claimed = cfg.variant != "slab-rec";
            if (have_intended) {
                if (prof.rows != intended.rows || (cols_claimed && prof.cols != intended.cols)) {
                    pass = false;
                    status = "profile-mismatch";
                }
            }
            if (pass && std::max(n, m) <= 128) {
                auto want = naive_rank_profiles(A.view());
                if (prof.rows != want.rows || (cols_claimed && prof.cols != want.cols)) {
                    pass = false;
                    status = "profile-vs-oracle-mismatch";
                }
            }
        }
        if (pass) status = "pass";
        exit_code = pass ? 0 : 1;
        std::cout << (pass ? "PASS" : "FAIL") << " check variant=" << cfg.variant << " n=" << n
                  << " m=" << m << " p=" << p << " rank=" << rank_req << " found=" << res.rank
                  << " seed=" << cfg.seed << " status=" << status << '\n';
        if (!pass)
            std::cout << "CheckFailed: variant=" << cfg.variant << " n=" << n << " m=" << m
                      << " p=" << p << " seed=" << cfg.seed << " (" << status << ")\n";
    } else if (cfg.mode == "count") {
        std::cout << "variant=" << cfg.variant << " n=" << n << " k=" << cfg.k
                  << " measured=" << led.total() << " (gemm=" << led.gemm
                  << " trsm=" << led.trsm << " utrsm=" << led.utrsm
                  << " base=" << led.pluq_base << ")";
        if (predicted) {
            const i64 diff = i64(led.total()) - i64(*predicted);
            std::cout << " predicted=" << *predicted << " diff=" << diff;
        } else {
            std::cout << " predicted=n/a";
        }
        std::cout << '\n';
    } else { // bench
        const double nn = double(std::min(n, m));
        const double gflops = seconds > 0 ? 2.0 * nn * nn * nn / 3.0 / seconds / 1e9 : 0.0;
        std::cout << "variant=" << cfg.variant << " n=" << n << " m=" << m << " p=" << p
                  << " rank=" << res.rank << " workers=" << cfg.workers
                  << " seconds=" << seconds << " gflops=" << gflops
                  << " checksum=" << std::hex << chk << std::dec
                  << " red_total=" << led.total() << " status=" << status << '\n';
        if (!cfg.out_path.empty()) emit_plot_script(cfg.out_path);
    }

    append_csv(cfg, n, m, p, rank_req, res.rank, seconds, chk, led, predicted, status);
    return exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact PLUQ factorization over Z/pZ: bench, check and count harness"};
    app.require_subcommand(1);

    Config cfg;
    if (const char* env = std::getenv("FFPLUQ_WORKERS")) cfg.workers = unsigned(std::atoi(env));
    if (cfg.workers == 0) cfg.workers = std::max(1u, std::thread::hardware_concurrency());

    const std::vector<std::string> variants{"right",    "left",     "crout",    "base",
                                            "slab-rec", "tile-rec", "slab-iter", "tile-iter"};
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--variant", cfg.variant, "algorithm variant")
            ->required()
            ->check(CLI::IsMember(variants));
        sub->add_option("--n", cfg.n, "rows (and columns unless --m)");
        sub->add_option("--m", cfg.m, "columns");
        sub->add_option("--p", cfg.p, "prime modulus, 2 <= p < 2^26");
        sub->add_option("--rank", cfg.rank, "target rank (default: full)");
        sub->add_option("--k", cfg.k, "block size of the iterative variants");
        sub->add_option("--threshold", cfg.threshold, "recursion cutoff");
        sub->add_option("--workers", cfg.workers, "parallel width (env FFPLUQ_WORKERS)");
        sub->add_option("--seed", cfg.seed, "PRNG seed (SplitMix64)");
        sub->add_option("--winograd", cfg.winograd, "multiplication cascade")
            ->check(CLI::IsMember({"on", "off"}));
        sub->add_option("--in", cfg.in_path, "read the input matrix from a .zpm file");
        sub->add_option("--out", cfg.out_path, "append a CSV row to this file");
    };
    add_common(app.add_subcommand("bench", "time a factorization and emit a CSV row"));
    add_common(app.add_subcommand("check", "factor, reconstruct and verify rank profiles"));
    add_common(app.add_subcommand("count", "measure modular reductions against the model"));

    CLI11_PARSE(app, argc, argv);
    cfg.mode = app.get_subcommands().front()->get_name();

    try {
        return run(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
