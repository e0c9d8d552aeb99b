#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "villagenet/data_io.hpp"
#include "villagenet/graph.hpp"
#include "villagenet/metrics.hpp"
#include "villagenet/parallel.hpp"
#include "villagenet/pipeline.hpp"
#include "villagenet/village_graph.hpp"
#include "villagenet/wlcf.hpp"

namespace {

using namespace villagenet;

// Output files are written in one shot after all computation succeeds, so a
// failed run never leaves a partial artifact behind.
void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path);
    }
    out << content;
    if (!out) {
        throw std::runtime_error("write failure on " + path);
    }
}

std::string format_labels_csv(const Partition& labels) {
    std::ostringstream out;
    out << "index,cluster\n";
    for (std::size_t i = 0; i < labels.n_items(); ++i) {
        out << i << ',' << labels.assignment[i] << '\n';
    }
    return out.str();
}

std::string format_graph_edges(const VillageGraph& graph) {
    std::ostringstream out;
    for (const WeightedEdge& edge : graph.edges) {
        out << edge.u << ' ' << edge.v << ' ' << static_cast<long long>(std::llround(edge.w))
            << '\n';
    }
    return out.str();
}

std::string format_report(const ClusteringReport& report, const std::string& dataset,
                          std::size_t n_rows, std::size_t n_cols) {
    std::ostringstream out;
    out << "dataset: " << dataset << '\n'
        << "points: " << n_rows << '\n'
        << "features: " << n_cols << '\n'
        << "k: " << report.params_used.k << '\n'
        << "r: " << report.params_used.r << '\n'
        << "seed: " << report.params_used.seed << '\n'
        << "standardize: " << (report.params_used.standardize ? "true" : "false") << '\n'
        << "restarts: " << report.params_used.restarts << '\n'
        << "walk_length: " << report.params_used.walk_length
        << (report.params_used.walk_length == 0 ? " (auto)" : "") << '\n'
        << "m_predicted: " << report.m_predicted << '\n';
    out << std::fixed << std::setprecision(6) << "kmeans_wcss: " << report.kmeans_wcss << '\n'
        << "kmeans_seconds: " << report.timings.kmeans_seconds << '\n'
        << "graph_seconds: " << report.timings.graph_seconds << '\n'
        << "communities_seconds: " << report.timings.communities_seconds << '\n'
        << "total_seconds: " << report.timings.total_seconds << '\n';
    out << std::setprecision(4);
    if (report.nmi_vs_truth) {
        out << "nmi: " << *report.nmi_vs_truth << '\n';
    }
    if (report.ari_vs_truth) {
        out << "ari: " << *report.ari_vs_truth << '\n';
    }
    if (report.worst_purity) {
        out << "worst_village_purity: " << *report.worst_purity << '\n';
    }
    return out.str();
}

struct ClusterArgs {
    std::string input;
    std::string out_labels = "labels.csv";
    std::string out_report;
    std::string out_graph;
    std::string label_column;
    bool has_header = false;
    VillageNetParams params;
};

int run_cluster(const ClusterArgs& args) {
    CsvOptions options;
    options.has_header = args.has_header;
    if (!args.label_column.empty()) {
        options.label_column = args.label_column;
    }
    const DataMatrix data = load_csv(args.input, options);
    const ClusteringReport report = fit(data, args.params);

    const std::string report_text =
        format_report(report, args.input, data.n_rows, data.n_cols);
    std::cout << report_text;
    write_file(args.out_labels, format_labels_csv(report.final_labels));
    if (!args.out_report.empty()) {
        write_file(args.out_report, report_text);
    }
    if (!args.out_graph.empty()) {
        write_file(args.out_graph, format_graph_edges(report.network));
    }
    return 0;
}

struct BenchArgs {
    std::string data_path;
    std::string label_column;
    bool has_header = false;
    std::size_t moons_n = 0;  // 0 = no synthetic dataset requested
    double moons_noise = 0.05;
    std::uint64_t moons_seed = 0;
    std::vector<int> ks;
    std::vector<int> rs{20};
    std::vector<std::uint64_t> seeds{0};
    bool standardize = false;
    int restarts = 1;
    int walk_length = 0;
    std::string out_path;
};

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t h = values.size() / 2;
    return values.size() % 2 ? values[h] : 0.5 * (values[h - 1] + values[h]);
}

int run_bench(const BenchArgs& args) {
    if (args.ks.empty() || args.rs.empty() || args.seeds.empty()) {
        throw std::invalid_argument("bench: need at least one value each for --k, --r, --seeds");
    }
    if (args.data_path.empty() == (args.moons_n == 0)) {
        throw std::invalid_argument("bench: give exactly one of --data or --moons");
    }

    DataMatrix data;
    std::string dataset;
    if (!args.data_path.empty()) {
        CsvOptions options;
        options.has_header = args.has_header;
        if (!args.label_column.empty()) {
            options.label_column = args.label_column;
        }
        data = load_csv(args.data_path, options);
        dataset = args.data_path;
    } else {
        data = make_two_moons(args.moons_n, args.moons_noise, args.moons_seed);
        dataset = "two-moons n=" + std::to_string(args.moons_n);
    }

    std::ostringstream table;
    table << "dataset: " << dataset << " (" << data.n_rows << " x " << data.n_cols << ")\n";
    table << std::setw(5) << "k" << std::setw(5) << "r" << std::setw(12) << "seed"
          << std::setw(5) << "m" << std::setw(9) << "nmi" << std::setw(9) << "ari"
          << std::setw(10) << "t_kmeans" << std::setw(9) << "t_graph" << std::setw(9)
          << "t_comms" << std::setw(9) << "t_total" << '\n';
    std::cout << table.str();

    bool any_failed = false;
    std::ostringstream medians;
    for (int k : args.ks) {
        for (int r : args.rs) {
            std::vector<double> ms, nmis, nmis_geom, aris;
            for (std::uint64_t seed : args.seeds) {
                VillageNetParams params;
                params.k = k;
                params.r = r;
                params.seed = seed;
                params.standardize = args.standardize;
                params.restarts = args.restarts;
                params.walk_length = args.walk_length;
                std::ostringstream row;
                try {
                    const ClusteringReport report = fit(data, params);
                    row << std::setw(5) << k << std::setw(5) << r << std::setw(12) << seed
                        << std::setw(5) << report.m_predicted << std::fixed
                        << std::setprecision(4);
                    if (report.nmi_vs_truth) {
                        row << std::setw(9) << *report.nmi_vs_truth << std::setw(9)
                            << *report.ari_vs_truth;
                    } else {
                        row << std::setw(9) << "-" << std::setw(9) << "-";
                    }
                    row << std::setprecision(3) << std::setw(10)
                        << report.timings.kmeans_seconds << std::setw(9)
                        << report.timings.graph_seconds << std::setw(9)
                        << report.timings.communities_seconds << std::setw(9)
                        << report.timings.total_seconds << '\n';
                    ms.push_back(report.m_predicted);
                    if (report.nmi_vs_truth) {
                        nmis.push_back(*report.nmi_vs_truth);
                        aris.push_back(*report.ari_vs_truth);
                        nmis_geom.push_back(nmi_geometric(
                            Partition::compacted(report.final_labels.assignment),
                            Partition::compacted(data.labels)));
                    }
                } catch (const std::exception& error) {
                    row << std::setw(5) << k << std::setw(5) << r << std::setw(12) << seed
                        << "  ERROR: " << error.what() << '\n';
                    any_failed = true;
                }
                std::cout << row.str();
                table << row.str();
            }
            if (!ms.empty()) {
                medians << "median k=" << k << " r=" << r << ": m=" << std::fixed
                        << std::setprecision(1) << median(ms);
                if (!nmis.empty()) {
                    medians << std::setprecision(4) << " nmi=" << median(nmis)
                            << " nmi_geom=" << median(nmis_geom) << " ari=" << median(aris);
                }
                medians << '\n';
            }
        }
    }
    std::cout << medians.str();
    table << medians.str();
    if (!args.out_path.empty()) {
        write_file(args.out_path, table.str());
    }
    return any_failed ? 1 : 0;
}

struct SynthArgs {
    std::size_t n = 0;
    double noise = 0.05;
    std::uint64_t seed = 0;
    std::string out_path;
};

int run_synth(const SynthArgs& args) {
    const DataMatrix data = make_two_moons(args.n, args.noise, args.seed);
    save_csv(data, args.out_path);
    std::cout << "wrote " << data.n_rows << " points to " << args.out_path << '\n';
    return 0;
}

struct CommunitiesArgs {
    std::string edges_path;
    std::string out_path = "communities.csv";
    std::uint64_t seed = 0;
    int walk_length = 0;
};

int run_communities(const CommunitiesArgs& args) {
    std::ifstream in(args.edges_path);
    if (!in) {
        throw std::runtime_error("cannot open edge list: " + args.edges_path);
    }
    std::vector<WeightedEdge> edges;
    int n = 0;
    std::string line;
    for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        std::istringstream fields(line);
        WeightedEdge edge;
        if (!(fields >> edge.u >> edge.v >> edge.w)) {
            throw std::runtime_error(args.edges_path + ": line " + std::to_string(line_no) +
                                     ": expected \"U V w\"");
        }
        if (edge.u < 0 || edge.v < 0) {
            throw std::runtime_error(args.edges_path + ": line " + std::to_string(line_no) +
                                     ": negative node id");
        }
        if (edge.w < 0.0) {
            throw std::runtime_error(args.edges_path + ": line " + std::to_string(line_no) +
                                     ": negative edge weight");
        }
        n = std::max({n, edge.u + 1, edge.v + 1});
        edges.push_back(edge);
    }
    if (edges.empty()) {
        throw std::invalid_argument("communities: edge list " + args.edges_path + " is empty");
    }

    WlcfParams params;
    params.walk_length = args.walk_length;
    const CommunityState state =
        wlcf_run(WeightedGraph::from_edges(n, edges), args.seed, params);

    std::ostringstream out;
    out << "node,community\n";
    for (std::size_t i = 0; i < state.partition.n_items(); ++i) {
        out << i << ',' << state.partition.assignment[i] << '\n';
    }
    write_file(args.out_path, out.str());
    std::cout << "communities: " << state.partition.m << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"villagenet: clustering via K-Means over-clustering into villages and "
                 "random-walk community detection on the village network"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "cap worker threads (0 = all cores)");

    ClusterArgs cluster_args;
    CLI::App* cluster = app.add_subcommand("cluster", "cluster a CSV dataset");
    cluster->add_option("input", cluster_args.input, "input CSV file")->required();
    cluster->add_option("--k", cluster_args.params.k, "number of villages")->required();
    cluster->add_option("--r", cluster_args.params.r, "exterior size per village");
    cluster->add_option("--seed", cluster_args.params.seed, "random seed");
    cluster->add_option("--out", cluster_args.out_labels, "output labels CSV");
    cluster->add_option("--report", cluster_args.out_report, "write the run report here too");
    cluster->add_option("--emit-graph", cluster_args.out_graph,
                        "write the village network as \"U V weight\" lines");
    cluster->add_option("--labels", cluster_args.label_column,
                        "ground-truth label column (name or 0-based index), used only for metrics");
    cluster->add_flag("--header", cluster_args.has_header, "input has a header row");
    cluster->add_flag("--standardize", cluster_args.params.standardize,
                      "standardize columns before clustering");
    cluster->add_option("--restarts", cluster_args.params.restarts,
                        "K-Means restarts (best WCSS kept)");
    cluster->add_option("--walk-length", cluster_args.params.walk_length,
                        "community-finder walk length (0 = automatic)");
    cluster->add_option("--kmeans-max-iter", cluster_args.params.kmeans_max_iter,
                        "K-Means iteration cap");
    cluster->add_option("--kmeans-tol", cluster_args.params.kmeans_tol,
                        "K-Means convergence tolerance");

    BenchArgs bench_args;
    CLI::App* bench = app.add_subcommand("bench", "run a (k, r) x seeds benchmark grid");
    bench->add_option("--data", bench_args.data_path, "input CSV file");
    bench->add_option("--labels", bench_args.label_column, "ground-truth label column");
    bench->add_flag("--header", bench_args.has_header, "input has a header row");
    bench->add_option("--moons", bench_args.moons_n, "use a synthetic two-moons dataset of this size");
    bench->add_option("--noise", bench_args.moons_noise, "two-moons noise level");
    bench->add_option("--moons-seed", bench_args.moons_seed, "two-moons generation seed");
    bench->add_option("--k", bench_args.ks, "village counts (comma separated)")
        ->required()
        ->delimiter(',');
    bench->add_option("--r", bench_args.rs, "exterior sizes (comma separated)")->delimiter(',');
    bench->add_option("--seeds", bench_args.seeds, "run seeds (comma separated)")->delimiter(',');
    bench->add_flag("--standardize", bench_args.standardize, "standardize columns");
    bench->add_option("--restarts", bench_args.restarts, "K-Means restarts per run");
    bench->add_option("--walk-length", bench_args.walk_length, "walk length (0 = automatic)");
    bench->add_option("--out", bench_args.out_path, "also write the table to this file");

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "generate a labeled two-moons CSV");
    synth->add_option("--n", synth_args.n, "number of points")->required();
    synth->add_option("--noise", synth_args.noise, "Gaussian noise standard deviation");
    synth->add_option("--seed", synth_args.seed, "random seed");
    synth->add_option("--out", synth_args.out_path, "output CSV")->required();

    CommunitiesArgs communities_args;
    CLI::App* communities =
        app.add_subcommand("communities", "find communities in a weighted edge list");
    communities->add_option("edges", communities_args.edges_path, "edge list file, lines \"U V w\"")
        ->required();
    communities->add_option("--out", communities_args.out_path, "output node,community CSV");
    communities->add_option("--seed", communities_args.seed, "random seed");
    communities->add_option("--walk-length", communities_args.walk_length,
                            "walk length (0 = automatic)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        return app.exit(help);
    } catch (const CLI::CallForAllHelp& help) {
        return app.exit(help);
    } catch (const CLI::ParseError& error) {
        app.exit(error);
        return 2;
    }

    try {
        if (threads > 0) {
            set_max_threads(threads);
        }
        if (cluster->parsed()) {
            return run_cluster(cluster_args);
        }
        if (bench->parsed()) {
            return run_bench(bench_args);
        }
        if (synth->parsed()) {
            return run_synth(synth_args);
        }
        return run_communities(communities_args);
    } catch (const std::invalid_argument& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 2;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 1;
    }
}
