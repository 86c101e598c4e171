#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <json.hpp>

#include "clcnet/bench_stats.hpp"
#include "clcnet/cdg.hpp"
#include "clcnet/conv.hpp"
#include "clcnet/model.hpp"
#include "clcnet/optimizer.hpp"
#include "clcnet/reference.hpp"

namespace {

// exit codes: 0 ok, 2 analysis negative, 64 usage, 65 bad data / infeasible
constexpr int kExitNotFcrf = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;

using namespace clcnet;

std::vector<std::uint64_t> parse_uint_list(const std::string& text, std::size_t expected,
                                           const std::string& flag) {
    std::vector<std::uint64_t> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const long long v = std::stoll(item, &used);
            if (used != item.size() || v < 0) throw std::invalid_argument(item);
            values.push_back(std::uint64_t(v));
        } catch (const std::exception&) {
            throw CLI::ValidationError(flag, "'" + item + "' is not a non-negative integer");
        }
    }
    if (values.size() != expected)
        throw CLI::ValidationError(flag, "expected " + std::to_string(expected) +
                                             " comma-separated integers");
    return values;
}

struct BenchKernel {
    KernelSpec spec;
    std::size_t res = 56;
    std::size_t batch = 1;
};

BenchKernel parse_kernel_flag(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--kernel", "expected key=value, got '" + item + "'");
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }

    auto take_uint = [&kv](const std::string& key, std::uint64_t fallback) {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        const std::uint64_t v = std::stoull(it->second);
        kv.erase(it);
        return v;
    };

    BenchKernel k;
    std::string kind = "regular";
    if (auto it = kv.find("kind"); it != kv.end()) {
        kind = it->second;
        kv.erase(it);
    }
    if (kind == "regular") k.spec.kind = KernelKind::Regular;
    else if (kind == "grouped") k.spec.kind = KernelKind::Grouped;
    else if (kind == "depthwise") k.spec.kind = KernelKind::Depthwise;
    else if (kind == "igc") k.spec.kind = KernelKind::InterlacedGrouped;
    else throw CLI::ValidationError("--kernel", "unknown kind '" + kind + "'");

    k.spec.in_channels = take_uint("in", 32);
    k.spec.out_channels = take_uint("out", k.spec.in_channels);
    const std::uint64_t ksize = take_uint("k", 3);
    k.spec.kernel_h = k.spec.kernel_w = ksize;
    k.spec.groups = take_uint("g", k.spec.kind == KernelKind::Depthwise ? k.spec.in_channels
                              : k.spec.kind == KernelKind::Regular      ? 1
                                                                        : 2);
    k.spec.stride = take_uint("stride", 1);
    k.spec.padding = take_uint("pad", ksize / 2);
    k.res = take_uint("res", 56);
    k.batch = take_uint("batch", 1);
    if (!kv.empty())
        throw CLI::ValidationError("--kernel", "unknown key '" + kv.begin()->first + "'");
    return k;
}

// deterministic inputs for run/bench, independent of library seeding
void fill_deterministic(real* data, std::size_t count, std::uint64_t seed) {
    std::uint64_t state = seed * 6364136223846793005ull + 1442695040888963407ull;
    for (std::size_t i = 0; i < count; ++i) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        data[i] = real(double(state >> 11) * 0x1.0p-53) * 2.0f - 1.0f;
    }
}

int cmd_analyze(const std::string& block_flag, const std::string& config_path) {
    std::vector<ChannelDependencyGraph> cdgs;
    std::vector<BlockParams> params;

    if (!block_flag.empty()) {
        const auto v = parse_uint_list(block_flag, 5, "--block");
        const BlockParams p{std::size_t(v[0]), std::size_t(v[1]), std::size_t(v[2]), 1,
                            std::size_t(v[3]), std::size_t(v[4])};
        const KernelSpec igc{KernelKind::InterlacedGrouped, p.m, p.l, 3, 3, p.g1, 1, 1};
        const KernelSpec gc{KernelKind::Grouped, p.l, p.n, 1, 1, p.g2, 1, 0};
        cdgs.push_back(compose(cdg_of_kernel(igc), cdg_of_kernel(gc)));
        params.push_back(p);
    } else {
        const NetworkSpec spec = build_clcnet(load_config(config_path));
        for (std::size_t i = 0; i < spec.blocks.size(); ++i) {
            cdgs.push_back(block_cdg(spec, i));
            params.push_back(spec.blocks[i]);
        }
    }

    std::size_t fcrf_blocks = 0;
    for (std::size_t i = 0; i < cdgs.size(); ++i) {
        const auto sizes = crf_sizes(cdgs[i]);
        std::size_t lo = sizes[0], hi = sizes[0];
        for (std::size_t s : sizes) {
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        const bool fcrf = has_fcrf(cdgs[i]);
        fcrf_blocks += fcrf ? 1 : 0;
        const BlockParams& p = params[i];
        std::cout << "block " << std::setw(2) << i + 1 << ": M=" << p.m << " L=" << p.l
                  << " N=" << p.n << " g1=" << p.g1 << " g2=" << p.g2 << " crf=";
        if (lo == hi) std::cout << lo;
        else std::cout << lo << ".." << hi;
        std::cout << " FCRF: " << (fcrf ? "yes" : "no") << "\n";
    }
    std::cout << "network: " << fcrf_blocks << "/" << cdgs.size() << " blocks with FCRF\n";
    return fcrf_blocks == cdgs.size() ? 0 : kExitNotFcrf;
}

int cmd_optimize(const std::string& channels_flag, std::uint64_t area, std::int64_t fix_g2) {
    const auto v = parse_uint_list(channels_flag, 3, "--channels");
    const CostQuery q{v[0], v[1], v[2], area};
    const CostResult r = fix_g2 > 0 ? fixed_g2_policy(q, std::uint64_t(fix_g2))
                                    : minimize_cost(q);
    std::cout << "g1=" << r.g1 << " g2=" << r.g2 << " cost=" << r.cost << "\n";
    return 0;
}

void print_report_text(const CostReport& report) {
    std::cout << std::left << std::setw(14) << "layer" << std::setw(11) << "kind"
              << std::right << std::setw(6) << "in" << std::setw(6) << "out" << std::setw(5)
              << "g" << std::setw(3) << "s" << std::setw(7) << "out_h" << std::setw(7)
              << "out_w" << std::setw(12) << "macs" << std::setw(10) << "params" << "\n";
    for (const LayerRecord& rec : report.layers) {
        std::cout << std::left << std::setw(14) << rec.name << std::setw(11) << rec.kind
                  << std::right << std::setw(6) << rec.in_channels << std::setw(6)
                  << rec.out_channels << std::setw(5) << rec.groups << std::setw(3)
                  << rec.stride << std::setw(7) << rec.out_h << std::setw(7) << rec.out_w
                  << std::setw(12) << rec.macs << std::setw(10) << rec.params << "\n";
    }
    std::cout << "total macs:   " << report.total_macs << "\n";
    std::cout << "total params: " << report.total_params << "\n";
    for (const auto& [kind, macs] : report.macs_by_kind)
        std::cout << "  " << std::left << std::setw(10) << kind << " macs=" << macs
                  << " params=" << report.params_by_kind.at(kind) << "\n";
}

nlohmann::json report_to_json(const CostReport& report) {
    nlohmann::json layers = nlohmann::json::array();
    for (const LayerRecord& rec : report.layers)
        layers.push_back({{"name", rec.name},
                          {"kind", rec.kind},
                          {"in_channels", rec.in_channels},
                          {"out_channels", rec.out_channels},
                          {"groups", rec.groups},
                          {"stride", rec.stride},
                          {"out_h", rec.out_h},
                          {"out_w", rec.out_w},
                          {"macs", rec.macs},
                          {"params", rec.params}});
    return nlohmann::json{{"layers", layers},
                          {"totals", {{"macs", report.total_macs},
                                      {"params", report.total_params}}},
                          {"macs_by_kind", report.macs_by_kind},
                          {"params_by_kind", report.params_by_kind}};
}

int cmd_report(const std::string& config_path, bool as_json) {
    const CostReport report = cost_report(build_clcnet(load_config(config_path)));
    if (as_json) std::cout << report_to_json(report).dump(2) << "\n";
    else print_report_text(report);
    return 0;
}

int cmd_run(const std::string& config_path, std::uint64_t seed, std::int64_t resolution) {
    NetworkConfig cfg = load_config(config_path);
    if (resolution > 0) {
        cfg.input_resolution = std::size_t(resolution);
        cfg.validate();
    }
    const NetworkSpec spec = build_clcnet(cfg);
    const WeightBundle weights = init_weights(spec, seed);

    Tensor4D input(1, 3, cfg.input_resolution, cfg.input_resolution);
    fill_deterministic(input.data(), input.size(), seed ^ 0x9e3779b97f4a7c15ull);

    const auto start = std::chrono::steady_clock::now();
    const Tensor4D logits = forward(spec, weights, input);
    const auto stop = std::chrono::steady_clock::now();

    std::size_t argmax = 0;
    real best = logits.at(0, 0, 0, 0);
    double sum = 0;
    for (std::size_t k = 0; k < logits.channels(); ++k) {
        const real v = logits.at(0, k, 0, 0);
        sum += double(v);
        if (v > best) {
            best = v;
            argmax = k;
        }
    }
    std::cout << "resolution: " << cfg.input_resolution << "\n";
    std::cout << "logits: " << logits.channels() << "\n";
    std::cout << "argmax: " << argmax << "\n";
    std::cout << std::setprecision(9) << "max: " << best << "\n";
    std::cout << std::setprecision(9) << "sum: " << sum << "\n";
    std::cerr << "forward time: "
              << std::chrono::duration<double, std::milli>(stop - start).count() << " ms\n";
    return 0;
}

void print_stats(const std::string& label, const BenchStats& stats) {
    std::cout << std::left << std::setw(12) << label << std::right << std::fixed
              << std::setprecision(3) << " median " << std::setw(10) << stats.median_ms
              << " ms   p10 " << std::setw(10) << stats.p10_ms << "   p90 " << std::setw(10)
              << stats.p90_ms << "   " << std::setprecision(2) << stats.gmacs_per_s
              << " GMAC/s\n";
}

int cmd_bench(const std::string& kernel_flag, int iters, std::uint64_t seed,
              bool with_serial) {
    const BenchKernel k = parse_kernel_flag(kernel_flag);
    k.spec.validate();

    Tensor4D input(k.batch, k.spec.in_channels, k.res, k.res);
    fill_deterministic(input.data(), input.size(), seed);
    WeightTensor weights(k.spec.out_channels, k.spec.in_per_group(), k.spec.kernel_h,
                         k.spec.kernel_w);
    fill_deterministic(weights.data(), weights.size(), seed + 1);

    const std::uint64_t macs = std::uint64_t(k.batch) * k.spec.output_h(k.res) *
                               k.spec.output_w(k.res) * k.spec.per_location_multiplies();

    std::cout << "kernel: " << kernel_kind_name(k.spec.kind) << " in=" << k.spec.in_channels
              << " out=" << k.spec.out_channels << " k=" << k.spec.kernel_h
              << " g=" << k.spec.groups << " stride=" << k.spec.stride
              << " pad=" << k.spec.padding << " res=" << k.res << " batch=" << k.batch
              << "\n";
#ifdef _OPENMP
    std::cout << "threads: " << omp_get_max_threads() << "\n";
#endif
    std::cout << "macs per pass: " << macs << "\n";

    if (k.spec.kind == KernelKind::InterlacedGrouped) {
        if (!igc_equivalence_check(input, weights, k.spec)) {
            std::cerr << "error: monolithic and two-step IGC outputs differ\n";
            return kExitData;
        }
        std::cout << "igc paths agree: yes\n";
    }

    print_stats("engine", measure([&] { conv2d(input, weights, k.spec); }, iters, macs));

    if (k.spec.kind == KernelKind::InterlacedGrouped) {
        KernelSpec grouped = k.spec;
        grouped.kind = KernelKind::Grouped;
        print_stats("two-step", measure(
                                    [&] {
                                        interlace_channels(conv2d(input, weights, grouped),
                                                           k.spec.groups);
                                    },
                                    iters, macs));
    }
    if (with_serial)
        print_stats("reference",
                    measure([&] { ref::conv2d(input, weights, k.spec); }, iters, macs));
    return 0;
}

int cmd_export_dot(const std::string& kernel_flag, const std::string& block_flag,
                   const std::string& out_path, const std::string& graph_name) {
    ChannelDependencyGraph cdg(1, 1);
    if (!kernel_flag.empty()) {
        const BenchKernel k = parse_kernel_flag(kernel_flag);
        k.spec.validate();
        cdg = cdg_of_kernel(k.spec);
    } else {
        const auto v = parse_uint_list(block_flag, 5, "--block");
        const KernelSpec igc{KernelKind::InterlacedGrouped, std::size_t(v[0]),
                             std::size_t(v[1]), 3, 3, std::size_t(v[3]), 1, 1};
        const KernelSpec gc{KernelKind::Grouped, std::size_t(v[1]), std::size_t(v[2]), 1, 1,
                            std::size_t(v[4]), 1, 0};
        cdg = compose(cdg_of_kernel(igc), cdg_of_kernel(gc));
    }
    DotLabels labels;
    if (!graph_name.empty()) labels.graph_name = graph_name;
    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return kExitData;
    }
    out << export_dot(cdg, labels);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"channel-local convolution toolkit: dependency analysis, group-parameter "
                 "optimization, cost reports, inference and kernel benchmarks"};
    app.require_subcommand(1);

    std::string block_flag, config_path, channels_flag, kernel_flag, out_path, graph_name;
    std::uint64_t area = 9, seed = 0;
    std::int64_t fix_g2 = 0, resolution = 0;
    int iters = 0;
    bool as_json = false, with_serial = false;

    CLI::App* analyze = app.add_subcommand("analyze", "report CRF sizes and FCRF verdicts");
    auto* analyze_block = analyze->add_option("--block", block_flag, "M,L,N,g1,g2");
    auto* analyze_config = analyze->add_option("--config", config_path, "network config JSON");
    analyze_block->excludes(analyze_config);

    CLI::App* optimize = app.add_subcommand("optimize", "minimize block cost over (g1, g2)");
    optimize->add_option("--channels", channels_flag, "M,L,N")->required();
    optimize->add_option("--area", area, "3x3 kernel spatial area (default 9)");
    optimize->add_option("--fix-g2", fix_g2, "pin g2 and minimize over g1 only");

    CLI::App* report = app.add_subcommand("report", "per-layer MAC and parameter accounting");
    report->add_option("--config", config_path, "network config JSON")->required();
    report->add_flag("--json", as_json, "machine-readable output");

    CLI::App* run = app.add_subcommand("run", "forward inference with seeded weights");
    run->add_option("--config", config_path, "network config JSON")->required();
    run->add_option("--seed", seed, "weight seed")->required();
    run->add_option("--resolution", resolution, "override input resolution");

    CLI::App* bench = app.add_subcommand("bench", "time a kernel and report throughput");
    bench->add_option("--kernel", kernel_flag,
                      "kind=regular|grouped|depthwise|igc,in=..,out=..,k=..,g=..,stride=..,"
                      "pad=..,res=..,batch=..")
        ->required();
    bench->add_option("--iters", iters, "timed passes")->required();
    bench->add_option("--seed", seed, "data seed");
    bench->add_flag("--serial", with_serial, "also time the serial reference kernel");

    CLI::App* export_dot_cmd = app.add_subcommand("export-dot", "write a dependency graph");
    auto* dot_kernel = export_dot_cmd->add_option("--kernel", kernel_flag, "kernel spec");
    auto* dot_block = export_dot_cmd->add_option("--block", block_flag, "M,L,N,g1,g2");
    dot_kernel->excludes(dot_block);
    export_dot_cmd->add_option("--out", out_path, "output DOT file")->required();
    export_dot_cmd->add_option("--name", graph_name, "graph name");

    try {
        app.parse(argc, argv);

        if (app.got_subcommand(analyze)) {
            if (block_flag.empty() == config_path.empty())
                throw CLI::ValidationError("analyze", "exactly one of --block / --config");
            return cmd_analyze(block_flag, config_path);
        }
        if (app.got_subcommand(optimize)) return cmd_optimize(channels_flag, area, fix_g2);
        if (app.got_subcommand(report)) return cmd_report(config_path, as_json);
        if (app.got_subcommand(run)) return cmd_run(config_path, seed, resolution);
        if (app.got_subcommand(bench)) {
            if (iters <= 0) throw CLI::ValidationError("--iters", "must be >= 1");
            return cmd_bench(kernel_flag, iters, seed, with_serial);
        }
        if (app.got_subcommand(export_dot_cmd))
            return cmd_export_dot(kernel_flag, block_flag, out_path, graph_name);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const clcnet::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 70;
    }
    return kExitUsage;
}
