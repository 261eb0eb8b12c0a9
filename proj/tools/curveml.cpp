// curveml: Euler-vector caches, catalog experiments and zero-count histograms.
//
// Exit status: 0 success, 1 bad input or arguments, 2 internal error.
// Reports go to stdout, diagnostics and timings to stderr.

#include "curveml/data_io.hpp"
#include "curveml/error.hpp"
#include "curveml/experiments.hpp"
#include "curveml/metrics.hpp"
#include "curveml/parallel.hpp"
#include "curveml/report_format.hpp"
#include "curveml/simd/kernels.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace curveml;

namespace {

struct Common {
    std::optional<unsigned> workers;
    std::uint64_t seed = 0;
    std::string isa;  // empty: widest supported, or CURVEML_ISA
};

struct Stopwatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
    out.flush();
    if (!out) throw InputError("error writing " + path.string());
}

VectorCache load_cache(const std::optional<std::string>& path) {
    VectorCache cache;
    if (path && fs::exists(*path))
        for (auto& v : cache_read(fs::path(*path))) cache.insert(std::move(v));
    return cache;
}

void save_cache(const std::optional<std::string>& path, const VectorCache& cache, std::size_t loaded) {
    if (!path || cache.size() == loaded) return;
    cache_write(fs::path(*path), cache.sorted_entries());
    std::cerr << "cache: " << cache.size() << " vectors in " << *path << '\n';
}

std::vector<CurveRecord> load_curves(const std::vector<std::string>& paths) {
    std::vector<CurveRecord> all;
    for (const auto& p : paths) {
        auto part = read_curves_csv(fs::path(p));
        std::cerr << p << ": " << part.size() << " curves\n";
        all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return all;
}

int cmd_euler(const std::string& input, const std::string& family, int n, const std::string& out, const Common& c) {
    const unsigned workers = resolve_workers(c.workers);
    if (n < 1) throw InputError("--n must be positive");
    Stopwatch sw;
    const auto records =
        family == "elliptic" ? read_elliptic_csv(fs::path(input)) : read_genus2_csv(fs::path(input));
    std::vector<EulerVector> vectors(records.size());
    parallel_for(records.size(), workers, [&](std::size_t i) { vectors[i] = l_vector(records[i], n); });
    cache_write(fs::path(out), vectors);
    std::cout << "curves=" << records.size() << '\n'
              << "kind=" << vector_kind_name(family == "elliptic" ? VectorKind::l_elliptic : VectorKind::l_genus2)
              << '\n'
              << "N=" << n << '\n'
              << "out=" << out << '\n';
    std::cerr << "euler: " << format_real(sw.seconds()) << " s with " << workers << " worker(s), "
              << simd::isa_name(simd::kernels().isa) << " kernels\n";
    return 0;
}

struct RunArgs {
    std::string experiment;
    std::vector<std::string> data;
    std::optional<std::string> cache;
    std::optional<std::string> classifier;
    std::optional<std::string> out_dir;
    int repeat = 1;
    int dim = 100;
    std::size_t count_per_class = 5000;
};

void emit(const std::string& text, const std::optional<std::string>& out_dir, const std::string& stem) {
    std::cout << text << '\n';
    if (out_dir) write_file(fs::path(*out_dir) / (stem + ".txt"), text);
}

int run_parity(const RunArgs& a, const Common& c, unsigned workers) {
    double nb = 0.0, forest = 0.0;
    for (int r = 0; r < a.repeat; ++r) {
        const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(r);
        Stopwatch sw;
        const auto res = synthetic_parity_experiment(a.dim, a.count_per_class, seed, workers);
        emit("seed=" + std::to_string(seed) + "\n" + res.render(), a.out_dir,
             "synthetic-parity.seed" + std::to_string(seed));
        std::cerr << "synthetic-parity seed " << seed << ": " << format_real(sw.seconds()) << " s\n";
        nb += res.nb_accuracy;
        forest += res.forest_accuracy;
    }
    if (a.repeat > 1)
        std::cout << "aggregate.runs=" << a.repeat << "\naggregate.nb_accuracy=" << format_real(nb / a.repeat)
                  << "\naggregate.forest_accuracy=" << format_real(forest / a.repeat) << '\n';
    return 0;
}

int run_catalog(const RunArgs& a, const Common& c, unsigned workers) {
    std::vector<ExperimentConfig> configs;
    const bool sweep = a.experiment == "sweep";
    if (a.experiment == "all") {
        configs = builtin_catalog();
    } else if (sweep) {
        configs.push_back(*find_experiment("T4"));
    } else if (auto cfg = find_experiment(a.experiment)) {
        configs.push_back(*cfg);
    } else {
        std::string names;
        for (const auto& cfg : builtin_catalog()) names += " " + cfg.name;
        throw InputError("unknown experiment '" + a.experiment + "'; valid names: all synthetic-parity sweep" + names);
    }
    if (a.data.empty()) throw InputError("--data is required for experiment " + a.experiment);

    RunOptions opts;
    opts.workers = workers;
    if (a.classifier) {
        opts.classifier = learn::parse_classifier(*a.classifier);
        if (!opts.classifier) throw InputError("unknown classifier '" + *a.classifier + "'");
    }
    const auto records = load_curves(a.data);
    auto cache = load_cache(a.cache);
    const std::size_t loaded = cache.size();
    opts.cache = &cache;

    bool have_elliptic = false, have_genus2 = false;
    for (const auto& r : records) (r.family() == CurveFamily::elliptic ? have_elliptic : have_genus2) = true;

    if (sweep) {
        std::vector<int> Ns;
        for (int n = 1; n <= 20; ++n) Ns.push_back(n);
        for (int r = 0; r < a.repeat; ++r) {
            auto cfg = configs.front();
            cfg.split.seed = c.seed + static_cast<std::uint64_t>(r);
            std::string csv = "N,precision,mcc\n";
            for (const auto& pt : coefficient_sweep(cfg, records, Ns, opts))
                csv += std::to_string(pt.N) + ',' + format_real(pt.precision) + ',' + format_real(pt.mcc) + '\n';
            emit("experiment=sweep\nbase=T4\nseed=" + std::to_string(cfg.split.seed) + "\n" + csv, a.out_dir,
                 "sweep.seed" + std::to_string(cfg.split.seed));
        }
        save_cache(a.cache, cache, loaded);
        return 0;
    }

    for (auto cfg : configs) {
        if (a.experiment == "all" &&
            !(cfg.family == CurveFamily::elliptic ? have_elliptic : have_genus2)) {
            std::cerr << cfg.name << ": skipped, no curves of its family\n";
            continue;
        }
        double p_sum = 0.0, m_sum = 0.0;
        for (int r = 0; r < a.repeat; ++r) {
            cfg.split.seed = c.seed + static_cast<std::uint64_t>(r);
            const auto report = run_experiment(cfg, records, opts);
            const auto stem = cfg.name + ".seed" + std::to_string(cfg.split.seed);
            emit(report.render(), a.out_dir, stem);
            if (a.out_dir) write_file(fs::path(*a.out_dir) / (stem + ".confusion.csv"), confusion_csv(report.confusion));
            std::cerr << cfg.name << " seed " << cfg.split.seed << ": " << format_real(report.wall_seconds) << " s\n";
            p_sum += report.precision;
            m_sum += report.mcc;
        }
        if (a.repeat > 1)
            std::cout << "aggregate.experiment=" << cfg.name << "\naggregate.runs=" << a.repeat
                      << "\naggregate.precision=" << format_real(p_sum / a.repeat)
                      << "\naggregate.mcc=" << format_real(m_sum / a.repeat) << "\n\n";
    }
    save_cache(a.cache, cache, loaded);
    return 0;
}

int cmd_run(const RunArgs& a, const Common& c) {
    const unsigned workers = resolve_workers(c.workers);
    if (a.repeat < 1) throw InputError("--repeat must be positive");
    if (a.out_dir) fs::create_directories(*a.out_dir);
    if (a.experiment == "synthetic-parity") return run_parity(a, c, workers);
    return run_catalog(a, c, workers);
}

int cmd_zero_hist(const std::vector<std::string>& data, int n, const std::string& out,
                  const std::optional<std::string>& cache_path, const Common& c) {
    const unsigned workers = resolve_workers(c.workers);
    if (n < 1) throw InputError("--n must be positive");
    const auto records = load_curves(data);
    for (const auto& r : records)
        if (r.family() == CurveFamily::elliptic && !r.labels.num_integral_points)
            throw InputError("curve " + r.label() + " has no num_integral_points label");
    auto cache = load_cache(cache_path);
    const std::size_t loaded = cache.size();
    const auto study = zero_count_study(records, n, workers, &cache);
    write_file(fs::path(out), study.histogram_csv());
    std::cout << "N=" << n << '\n' << study.render();
    save_cache(cache_path, cache, loaded);
    return 0;
}

void list_experiments() {
    std::cout << "synthetic-parity  parity task on random integer vectors (no data needed)\n"
              << "sweep             T4 accuracy for N = 1..20\n";
    for (const auto& cfg : builtin_catalog())
        std::cout << cfg.name << std::string(cfg.name.size() < 18 ? 18 - cfg.name.size() : 1, ' ') << cfg.description
                  << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Euler-coefficient features and classifiers for curves over Q"};
    app.require_subcommand(1);
    Common common;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--workers", common.workers, "worker threads (default: CURVEML_WORKERS or 1)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--seed", common.seed, "base seed; repetition r uses seed + r");
        sub->add_option("--isa", common.isa, "kernel set: scalar or avx2 (default: widest supported)")
            ->check(CLI::IsMember({"scalar", "avx2"}));
    };

    std::string input, family, out;
    int n = 500;
    auto* euler = app.add_subcommand("euler", "compute L vectors for a curve file and write a cache");
    euler->add_option("--input", input, "curve CSV")->required()->check(CLI::ExistingFile);
    euler->add_option("--family", family, "elliptic or genus2")->required()->check(CLI::IsMember({"elliptic", "genus2"}));
    euler->add_option("--n", n, "number of primes")->required();
    euler->add_option("--out", out, "cache file to write")->required();
    add_common(euler);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "run a named experiment (see `list`)");
    run->add_option("--experiment", run_args.experiment, "catalog name, all, synthetic-parity or sweep")->required();
    run->add_option("--data", run_args.data, "curve CSV (repeatable)")->check(CLI::ExistingFile);
    run->add_option("--cache", run_args.cache, "L-vector cache, read if present and updated");
    run->add_option("--repeat", run_args.repeat, "repetitions with seeds seed, seed+1, ...");
    run->add_option("--classifier", run_args.classifier, "override: nb, nb-gaussian, logistic, forest");
    run->add_option("--out-dir", run_args.out_dir, "also write each report and confusion CSV here");
    run->add_option("--dim", run_args.dim, "synthetic-parity vector length");
    run->add_option("--count-per-class", run_args.count_per_class, "synthetic-parity vectors per class");
    add_common(run);

    std::vector<std::string> hist_data;
    std::optional<std::string> hist_cache;
    int hist_n = 500;
    auto* hist = app.add_subcommand("zero-hist", "histograms of zero counts by integral-point class");
    hist->add_option("--data", hist_data, "elliptic curve CSV (repeatable)")->required()->check(CLI::ExistingFile);
    hist->add_option("--n", hist_n, "number of primes");
    hist->add_option("--out", out, "histogram CSV to write")->required();
    hist->add_option("--cache", hist_cache, "L-vector cache, read if present and updated");
    add_common(hist);

    auto* list = app.add_subcommand("list", "list experiment names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (!common.isa.empty()) {
            const auto isa = common.isa == "avx2" ? simd::Isa::avx2 : simd::Isa::scalar;
            if (!simd::isa_supported(isa)) throw InputError("this CPU does not support --isa " + common.isa);
            simd::set_active_isa(isa);
        }
        if (*euler) return cmd_euler(input, family, n, out, common);
        if (*run) return cmd_run(run_args, common);
        if (*hist) return cmd_zero_hist(hist_data, hist_n, out, hist_cache, common);
        if (*list) {
            list_experiments();
            return 0;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
