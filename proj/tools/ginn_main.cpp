#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ginn/check_harness.hpp"
#include "ginn/checkpoint.hpp"
#include "ginn/data_io.hpp"
#include "ginn/dense_reference.hpp"
#include "ginn/errors.hpp"
#include "ginn/gi_layer.hpp"
#include "ginn/graph_io.hpp"
#include "ginn/memstats.hpp"
#include "ginn/model.hpp"
#include "ginn/random_graph.hpp"
#include "ginn/rng.hpp"
#include "ginn/sparse_adjacency.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2e", v);
    return buf;
}

std::string fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::vector<int> iota_vec(int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 0);
    return v;
}

// ---------------------------------------------------------------------------
// check: randomized sparse-vs-dense forward sweep + finite-difference
// gradient sweep. Exit 0 iff every trial passes.

struct CheckOptions {
    int trials = 200;
    int grad_trials = 50;
    std::uint64_t seed = 12345;
    std::string generate = "er";
    int n_fixed = 0;  // 0 = draw from [n_min, n_max]
    int n_min = 2;
    int n_max = 30;
    double density = 0.4;
    int features = 0;  // 0 = draw from 1..max_features
    int filters = 0;
    int max_features = 4;
    int max_filters = 4;
    int max_batch = 5;
    std::vector<double> lambdas;
    bool symmetric = false;
    std::string graph_file;
    std::string replay_file = "check-failure.json";
    double forward_tol = 1e-10;
    bool full_graph = false;
    bool corrupt = false;  // hidden hook: negate weights between the two paths
};

std::string trial_tag(const ginn::TrialInstance& t) {
    const ginn::GILayerConfig& cfg = t.layer.config();
    std::string s = "n=" + std::to_string(t.n) +
                    " n1=" + std::to_string(t.layer.input_nodes()) +
                    " n2=" + std::to_string(t.layer.output_nodes()) +
                    " K=" + std::to_string(t.layer.num_features()) +
                    " F=" + std::to_string(t.layer.num_filters()) +
                    " M=" + std::to_string(t.x.dim0()) + " lambda=";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", cfg.selfloop_value);
    s += buf;
    s += " act=" + ginn::to_string(cfg.activation);
    s += " pool=" + (cfg.pool ? ginn::to_string(*cfg.pool) : std::string("-"));
    s += cfg.use_bias ? " bias=yes" : " bias=no";
    return s;
}

ordered_json replay_document(const ginn::TrialInstance& t) {
    ordered_json doc;
    doc["n"] = t.n;
    doc["density"] = t.density;
    ordered_json edges = ordered_json::array();
    for (const ginn::Edge& e : t.edges)
        edges.push_back({e.row, e.col, e.value});
    doc["edges"] = std::move(edges);
    doc["v1"] = t.v1;
    doc["v2"] = t.v2;
    const ginn::GILayerConfig& cfg = t.layer.config();
    doc["config"] = {{"selfloop_value", cfg.selfloop_value},
                     {"num_filters", cfg.num_filters},
                     {"activation", ginn::to_string(cfg.activation)},
                     {"use_bias", cfg.use_bias},
                     {"pool", cfg.pool ? ordered_json(ginn::to_string(*cfg.pool))
                                       : ordered_json(nullptr)}};
    doc["num_features"] = t.layer.num_features();
    auto w = t.layer.params().weights.data();
    doc["weights"] = std::vector<double>(w.begin(), w.end());
    auto b = t.layer.params().bias.data();
    doc["bias"] = std::vector<double>(b.begin(), b.end());
    auto xs = t.x.data();
    doc["x"] = {{"shape", {t.x.dim0(), t.x.dim1(), t.x.dim2()}},
                {"data", std::vector<double>(xs.begin(), xs.end())}};
    return doc;
}

void write_replay(const std::string& path, ordered_json doc) {
    std::ofstream out(path);
    if (!out) {
        std::cerr << "warning: cannot write replay file " << path << "\n";
        return;
    }
    out << doc.dump(2) << "\n";
    std::cerr << "replay instance written to " << path << "\n";
}

int cmd_check(const CheckOptions& o) {
    ginn::SweepOptions sweep;
    sweep.n_min = o.n_fixed > 0 ? o.n_fixed : o.n_min;
    sweep.n_max = o.n_fixed > 0 ? o.n_fixed : o.n_max;
    sweep.max_density = o.density;
    sweep.min_features = o.features > 0 ? o.features : 1;
    sweep.max_features = o.features > 0 ? o.features : o.max_features;
    sweep.min_filters = o.filters > 0 ? o.filters : 1;
    sweep.max_filters = o.filters > 0 ? o.filters : o.max_filters;
    sweep.max_batch = o.max_batch;
    if (!o.lambdas.empty()) sweep.lambdas = o.lambdas;
    sweep.random_subsets = !o.full_graph;
    if (o.symmetric) sweep.symmetric = true;

    std::optional<ginn::GraphData> file_graph;
    if (!o.graph_file.empty()) {
        file_graph = ginn::load_graph(o.graph_file);
        if (file_graph->rows != file_graph->cols)
            throw ginn::ShapeError("check: adjacency must be square, " + o.graph_file +
                                   " is " + std::to_string(file_graph->rows) + "x" +
                                   std::to_string(file_graph->cols));
        std::cout << "graph: " << o.graph_file << " (n=" << file_graph->rows
                  << ", edges=" << file_graph->edges.size() << ")\n";
    }

    std::mt19937_64 rng(o.seed);
    auto draw = [&](bool conditioned) -> ginn::TrialInstance {
        if (!file_graph)
            return conditioned ? ginn::random_fd_trial(rng, sweep)
                               : ginn::random_trial(rng, sweep);
        for (int attempt = 0; attempt < 500; ++attempt) {
            ginn::TrialInstance t = ginn::random_trial_on_graph(
                rng, sweep, file_graph->edges, file_graph->rows);
            if (!conditioned || ginn::fd_well_conditioned(t.layer, t.x)) return t;
        }
        return ginn::random_trial_on_graph(rng, sweep, file_graph->edges,
                                           file_graph->rows);
    };

    bool replay_written = false;
    int fwd_failures = 0;
    double worst_fwd = 0.0;
    for (int trial = 0; trial < o.trials; ++trial) {
        ginn::TrialInstance t = draw(false);
        ginn::BatchTensor sparse_out = t.layer.forward(t.x);
        if (o.corrupt)
            for (double& wi : t.layer.params().weights.data())
                wi = (wi == 0.0) ? 1.0 : -wi;
        ginn::DenseGITensor wt = ginn::assemble_w_tilde(
            t.layer.adjacency(), t.layer.config().selfloop_value, t.layer.params());
        ginn::Matrix bias = t.layer.config().use_bias
                                ? t.layer.params().bias
                                : ginn::Matrix(t.layer.output_nodes(),
                                               t.layer.num_filters());
        ginn::BatchTensor dense_out = ginn::forward_dense(
            wt, t.x, bias, t.layer.config().activation, t.layer.config().pool);
        double err = ginn::max_relative_error(sparse_out, dense_out);
        worst_fwd = std::max(worst_fwd, err);
        bool ok = err <= o.forward_tol;
        std::cout << "forward " << (trial + 1) << "/" << o.trials << "  "
                  << trial_tag(t) << "  rel_err=" << sci(err)
                  << (ok ? "  ok" : "  FAIL") << "\n";
        if (!ok) {
            ++fwd_failures;
            if (!replay_written) {
                ordered_json doc = replay_document(t);
                doc["failure"] = {{"kind", "forward"}, {"rel_err", err}};
                write_replay(o.replay_file, std::move(doc));
                replay_written = true;
            }
        }
    }

    int grad_failures = 0;
    double worst_grad = 0.0;
    for (int trial = 0; trial < o.grad_trials; ++trial) {
        ginn::TrialInstance t = draw(true);
        ginn::GradCheckReport rep = ginn::gradient_fd_check(t.layer, t.x);
        worst_grad = std::max(worst_grad, rep.max_error);
        std::cout << "gradient " << (trial + 1) << "/" << o.grad_trials << "  "
                  << trial_tag(t) << "  err/tol=" << sci(rep.max_error)
                  << (rep.pass ? "  ok" : "  FAIL at " + rep.worst) << "\n";
        if (!rep.pass) {
            ++grad_failures;
            if (!replay_written) {
                ordered_json doc = replay_document(t);
                doc["failure"] = {{"kind", "gradient"},
                                  {"err_over_tol", rep.max_error},
                                  {"worst", rep.worst}};
                write_replay(o.replay_file, std::move(doc));
                replay_written = true;
            }
        }
    }

    std::cout << "forward sweep: " << (o.trials - fwd_failures) << "/" << o.trials
              << " passed, worst rel_err " << sci(worst_fwd) << " (tol "
              << sci(o.forward_tol) << ")\n";
    std::cout << "gradient sweep: " << (o.grad_trials - grad_failures) << "/"
              << o.grad_trials << " passed, worst err/tol " << sci(worst_grad)
              << "\n";
    return (fwd_failures + grad_failures) == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// bench: value-slot counts, measured heap deltas, and median forward wall
// time for the sparse layer and the materialized dense tensor on one ER graph.

struct BenchOptions {
    int n = 1000;
    double density = 0.01;
    int features = 2;
    int filters = 2;
    int batch = 8;
    int repeats = 5;
    double selfloop = 1.0;
    double cap = 1e8;  // skip the dense path above this many value slots
    std::uint64_t seed = 1;
    bool symmetric = false;
    std::string out_file;
};

double median_ms(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    std::size_t h = xs.size() / 2;
    if (xs.size() % 2 == 1) return xs[h];
    return 0.5 * (xs[h - 1] + xs[h]);
}

int cmd_bench(const BenchOptions& o) {
    std::ofstream fout;
    std::ostream* out = &std::cout;
    if (!o.out_file.empty()) {
        fout.open(o.out_file);
        if (!fout) throw ginn::Error("bench: cannot open " + o.out_file);
        out = &fout;
    }

    std::vector<ginn::Edge> edges = ginn::erdos_renyi(o.n, o.density, o.seed, o.symmetric);
    std::vector<int> all = iota_vec(o.n);
    ginn::GILayerConfig cfg;
    cfg.selfloop_value = o.selfloop;
    cfg.num_filters = o.filters;

    std::optional<std::size_t> before = ginn::heap_bytes_in_use();
    ginn::GILayer layer = ginn::GILayer::build(ginn::from_edge_list(edges, all, all),
                                               cfg, o.features, o.seed);
    std::optional<std::size_t> after = ginn::heap_bytes_in_use();
    std::string sparse_measured;
    if (before && after && *after >= *before)
        sparse_measured = std::to_string(*after - *before);

    std::size_t nnz = static_cast<std::size_t>(layer.augmented_adjacency().nnz());
    std::size_t sparse_slots =
        ginn::sparse_memory_count(nnz, o.n, o.n, o.features, o.filters);

    std::mt19937_64 rng(o.seed + 17);
    ginn::BatchTensor x(o.batch, o.n, o.features);
    for (double& v : x.data()) v = ginn::uniform(rng, -1.0, 1.0);

    double sink = 0.0;
    std::vector<double> times;
    for (int rep = 0; rep < o.repeats; ++rep) {
        auto t0 = std::chrono::steady_clock::now();
        ginn::BatchTensor y = layer.forward(x);
        auto t1 = std::chrono::steady_clock::now();
        sink += y.data().empty() ? 0.0 : y.data()[0];
        times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }

    (*out) << "mode,n,nnz,value_slots,measured_bytes,median_wall_ms\n";
    (*out) << "sparse," << o.n << "," << nnz << "," << sparse_slots << ","
           << sparse_measured << "," << fixed3(median_ms(times)) << "\n";

    std::size_t dense_slots =
        ginn::dense_memory_count(o.n, o.n, o.features, o.filters);
    if (static_cast<double>(dense_slots) > o.cap) {
        (*out) << "dense," << o.n << "," << nnz << "," << dense_slots
               << ",,skipped(cap)\n";
    } else {
        std::optional<std::size_t> dbefore = ginn::heap_bytes_in_use();
        ginn::DenseGITensor wt =
            ginn::assemble_w_tilde(layer.adjacency(), o.selfloop, layer.params());
        std::optional<std::size_t> dafter = ginn::heap_bytes_in_use();
        std::string dense_measured;
        if (dbefore && dafter && *dafter >= *dbefore)
            dense_measured = std::to_string(*dafter - *dbefore);

        std::vector<double> dtimes;
        for (int rep = 0; rep < o.repeats; ++rep) {
            auto t0 = std::chrono::steady_clock::now();
            ginn::BatchTensor y = ginn::forward_dense(wt, x, layer.params().bias,
                                                      cfg.activation, cfg.pool);
            auto t1 = std::chrono::steady_clock::now();
            sink += y.data().empty() ? 0.0 : y.data()[0];
            dtimes.push_back(
                std::chrono::duration<double, std::milli>(t1 - t0).count());
        }
        (*out) << "dense," << o.n << "," << nnz << "," << dense_slots << ","
               << dense_measured << "," << fixed3(median_ms(dtimes)) << "\n";
    }
    if (!std::isfinite(sink))
        std::cerr << "warning: non-finite forward output\n";
    return 0;
}

// ---------------------------------------------------------------------------
// train: fit a layer stack on (input, target) rows and write a checkpoint
// plus the per-epoch loss history.

struct TrainOptions {
    std::string graph;
    std::string data;
    std::string config;
    std::string out_dir = ".";
};

int cmd_train(const TrainOptions& o) {
    ginn::GraphData g = ginn::load_graph(o.graph);
    if (g.rows != g.cols)
        throw ginn::ShapeError("train: adjacency must be square, " + o.graph + " is " +
                               std::to_string(g.rows) + "x" + std::to_string(g.cols));
    const int n = g.rows;
    std::vector<int> all = iota_vec(n);

    std::ifstream in(o.config);
    if (!in) throw ginn::ParseError(o.config + ": cannot open");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& ex) {
        throw ginn::ParseError(o.config + ": " + ex.what());
    }

    int num_features = doc.value("num_features", 1);
    std::uint64_t init_seed = doc.value("init_seed", std::uint64_t{42});
    if (!doc.contains("layers") || !doc["layers"].is_array() || doc["layers"].empty())
        throw ginn::ParseError(o.config + ": \"layers\" must be a non-empty array");

    ginn::GinnModel model;
    std::vector<std::string> warnings;
    int feats = num_features;
    try {
        for (std::size_t t = 0; t < doc["layers"].size(); ++t) {
            const json& ls = doc["layers"][t];
            ginn::GILayerConfig cfg;
            cfg.num_filters = ls.value("num_filters", 1);
            cfg.selfloop_value = ls.value("selfloop_value", 1.0);
            cfg.activation = ginn::activation_from_string(ls.value("activation", "identity"));
            cfg.use_bias = ls.value("use_bias", true);
            if (ls.contains("pool") && !ls["pool"].is_null())
                cfg.pool = ginn::pool_from_string(ls["pool"].get<std::string>());
            ginn::SparseAdjacency adj = ginn::from_edge_list(
                g.edges, all, all, t == 0 ? &warnings : nullptr);
            model.add_layer(ginn::GILayer::build(std::move(adj), cfg, feats,
                                                 init_seed + t));
            feats = cfg.pool ? 1 : cfg.num_filters;
        }
    } catch (const json::exception& ex) {
        throw ginn::ParseError(o.config + ": " + ex.what());
    }
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";

    ginn::TrainConfig tc;
    if (doc.contains("train")) {
        const json& tr = doc["train"];
        tc.learning_rate = tr.value("learning_rate", tc.learning_rate);
        tc.epochs = tr.value("epochs", tc.epochs);
        tc.batch_size = tr.value("batch_size", tc.batch_size);
        tc.seed = tr.value("seed", tc.seed);
    }

    auto table = ginn::read_numeric_table(o.data);
    if (table.empty()) throw ginn::ParseError(o.data + ": no samples");
    const int in_cols = n * num_features;
    const int out_cols = model.output_nodes() * model.output_features();
    if (static_cast<int>(table[0].size()) != in_cols + out_cols)
        throw ginn::ShapeError(
            o.data + ": expected " + std::to_string(in_cols + out_cols) +
            " columns (" + std::to_string(in_cols) + " inputs + " +
            std::to_string(out_cols) + " targets), got " +
            std::to_string(table[0].size()));
    std::vector<std::vector<double>> xin(table.size()), yout(table.size());
    for (std::size_t m = 0; m < table.size(); ++m) {
        xin[m].assign(table[m].begin(), table[m].begin() + in_cols);
        yout[m].assign(table[m].begin() + in_cols, table[m].end());
    }
    ginn::BatchTensor x = ginn::table_to_batch(xin, n, num_features, o.data + " inputs");
    ginn::BatchTensor y = ginn::table_to_batch(yout, model.output_nodes(),
                                               model.output_features(),
                                               o.data + " targets");

    std::vector<double> history;
    try {
        history = ginn::train_mse(model, x, y, tc);
    } catch (const ginn::DivergenceError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 3;
    }

    fs::create_directories(o.out_dir);
    fs::path ckpt = fs::path(o.out_dir) / "checkpoint.json";
    fs::path loss_path = fs::path(o.out_dir) / "loss_history.txt";
    ginn::save_checkpoint(model, ckpt);
    std::ofstream lf(loss_path);
    if (!lf) throw ginn::Error("train: cannot open " + loss_path.string());
    for (double v : history) lf << ginn::format_double(v) << "\n";

    std::cout << "trained " << model.layer_count() << " layer(s), "
              << history.size() << " epoch(s), " << table.size() << " sample(s)\n";
    if (!history.empty())
        std::cout << "loss " << ginn::format_double(history.front()) << " -> "
                  << ginn::format_double(history.back()) << "\n";
    std::cout << "checkpoint: " << ckpt.string() << "\n";
    std::cout << "loss history: " << loss_path.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// eval: load a checkpoint, run the model over input rows, write predictions.

struct EvalOptions {
    std::string checkpoint;
    std::string input;
    std::string out;
};

int cmd_eval(const EvalOptions& o) {
    ginn::GinnModel model = ginn::load_checkpoint(o.checkpoint);
    auto table = ginn::read_numeric_table(o.input);
    ginn::BatchTensor x = ginn::table_to_batch(table, model.input_nodes(),
                                               model.input_features(), o.input);
    ginn::BatchTensor y = model.forward(x);
    ginn::write_batch(y, o.out);
    std::cout << "wrote " << y.dim0() << " prediction(s) of shape ("
              << y.dim1() << ", " << y.dim2() << ") to " << o.out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse graph-informed layer toolkit"};
    app.require_subcommand(1);

    CheckOptions co;
    CLI::App* check = app.add_subcommand(
        "check", "randomized sparse-vs-dense and gradient verification");
    check->add_option("--trials", co.trials, "forward oracle trials")
        ->capture_default_str();
    check->add_option("--grad-trials", co.grad_trials, "gradient check trials")
        ->capture_default_str();
    check->add_option("--seed", co.seed, "sweep RNG seed")->capture_default_str();
    check->add_option("--generate", co.generate, "random graph family")
        ->check(CLI::IsMember({"er"}))
        ->capture_default_str();
    check->add_option("--n", co.n_fixed, "fixed node count (otherwise the n-min..n-max range)");
    check->add_option("--n-min", co.n_min, "smallest random graph")
        ->capture_default_str();
    check->add_option("--n-max", co.n_max, "largest random graph")
        ->capture_default_str();
    check->add_option("--density", co.density, "max edge density")
        ->capture_default_str();
    check->add_option("--features", co.features, "fixed input feature count K");
    check->add_option("--filters", co.filters, "fixed filter count F");
    check->add_option("--max-features", co.max_features, "max input features K")
        ->capture_default_str();
    check->add_option("--max-filters", co.max_filters, "max filters F")
        ->capture_default_str();
    check->add_flag("--symmetric", co.symmetric, "draw undirected graphs only");
    check->add_option("--max-batch", co.max_batch, "max batch size M")
        ->capture_default_str();
    check->add_option("--lambda", co.lambdas,
                      "self-loop values to draw from (default 0 0.5 1 2)");
    check->add_option("--graph", co.graph_file,
                      "run every trial on this graph file instead of random graphs")
        ->check(CLI::ExistingFile);
    check->add_option("--replay-out", co.replay_file,
                      "where to write the first failing instance")
        ->capture_default_str();
    check->add_option("--tol", co.forward_tol, "forward relative tolerance")
        ->capture_default_str();
    check->add_flag("--full-graph", co.full_graph,
                    "act on the full node set instead of random subsets");
    check->add_flag("--corrupt-weights", co.corrupt)->group("");

    BenchOptions bo;
    CLI::App* bench = app.add_subcommand(
        "bench", "sparse vs dense memory and runtime on a random graph");
    bench->add_option("--n", bo.n, "node count")->capture_default_str();
    bench->add_option("--density", bo.density, "edge probability")
        ->capture_default_str();
    bench->add_option("--features", bo.features, "input features K")
        ->capture_default_str();
    bench->add_option("--filters", bo.filters, "filters F")->capture_default_str();
    bench->add_option("--batch", bo.batch, "batch size M")->capture_default_str();
    bench->add_option("--repeats", bo.repeats, "timing repetitions")
        ->capture_default_str();
    bench->add_option("--selfloop", bo.selfloop, "self-loop value lambda")
        ->capture_default_str();
    bench->add_option("--cap", bo.cap, "skip the dense path above this many slots")
        ->capture_default_str();
    bench->add_option("--seed", bo.seed, "graph + parameter seed")
        ->capture_default_str();
    bench->add_flag("--symmetric", bo.symmetric, "draw an undirected graph");
    bench->add_option("--out", bo.out_file, "CSV output file (default stdout)");

    TrainOptions to;
    CLI::App* train = app.add_subcommand("train", "fit a model and write a checkpoint");
    train->add_option("--graph", to.graph, "adjacency file (edge list or MatrixMarket)")
        ->required()
        ->check(CLI::ExistingFile);
    train->add_option("--data", to.data,
                      "samples: n*K input columns then n_out*F_out target columns")
        ->required()
        ->check(CLI::ExistingFile);
    train->add_option("--config", to.config, "model + training JSON config")
        ->required()
        ->check(CLI::ExistingFile);
    train->add_option("--out", to.out_dir, "output directory")->capture_default_str();

    EvalOptions eo;
    CLI::App* eval = app.add_subcommand("eval", "run a checkpoint over input rows");
    eval->add_option("--checkpoint", eo.checkpoint, "checkpoint file")
        ->required()
        ->check(CLI::ExistingFile);
    eval->add_option("--input", eo.input, "input rows, n*K columns per sample")
        ->required()
        ->check(CLI::ExistingFile);
    eval->add_option("--out", eo.out, "predictions output file")->required();

    int rc = 0;
    check->callback([&] { rc = cmd_check(co); });
    bench->callback([&] { rc = cmd_bench(bo); });
    train->callback([&] { rc = cmd_train(to); });
    eval->callback([&] { rc = cmd_eval(eo); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ginn::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
