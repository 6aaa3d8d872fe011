// Regenerates tests/fixtures/. Run from the repo root after changing any of
// the formats involved; outputs are committed so tests stay hermetic.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <vector>

#include "ginn/checkpoint.hpp"
#include "ginn/data_io.hpp"
#include "ginn/dense_reference.hpp"
#include "ginn/gi_layer.hpp"
#include "ginn/model.hpp"
#include "ginn/rng.hpp"
#include "ginn/sparse_adjacency.hpp"

namespace fs = std::filesystem;
using namespace ginn;

int main(int argc, char** argv) {
    fs::path dir = argc > 1 ? argv[1] : "tests/fixtures";
    fs::create_directories(dir);

    // Fixture graph: 8-node ring plus three chords; every node has degree
    // >= 2 so the node count is recoverable from the edge list.
    const int n = 8;
    std::vector<Edge> edges;
    auto undirected = [&](int a, int b) {
        edges.push_back({a, b, 1.0});
        edges.push_back({b, a, 1.0});
    };
    for (int i = 0; i < n; ++i) undirected(i, (i + 1) % n);
    undirected(0, 4);
    undirected(2, 6);
    undirected(1, 5);

    {
        std::ofstream gf(dir / "teacher_graph.txt");
        gf << "# 8-node ring with chords (0,4), (2,6), (1,5); undirected\n";
        for (const Edge& e : edges) gf << e.row << "\t" << e.col << "\n";
    }

    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);

    // Frozen teacher: one identity-activation layer, K = F = 1, lambda = 1,
    // random bias.
    GILayerConfig cfg;
    GILayer teacher = GILayer::build(from_edge_list(edges, all, all), cfg, 1, 2024);
    std::mt19937_64 rng(555);
    for (double& b : teacher.params().bias.data()) b = uniform(rng, -0.5, 0.5);

    GinnModel teacher_model;
    teacher_model.add_layer(teacher);
    save_checkpoint(teacher_model, dir / "teacher_checkpoint.json");

    const GILayer& tl = teacher_model.layer(0);
    DenseGITensor wt = assemble_w_tilde(tl.adjacency(), cfg.selfloop_value, tl.params());

    // Training table: inputs and teacher outputs side by side, generated
    // through the dense reference path.
    const int samples = 16;
    BatchTensor x_train(samples, n, 1);
    for (double& v : x_train.data()) v = uniform(rng, -1.0, 1.0);
    BatchTensor y_train = forward_dense(wt, x_train, tl.params().bias,
                                        cfg.activation, cfg.pool);
    {
        std::ofstream df(dir / "train_data.txt");
        df << "# columns: 8 node inputs, then 8 teacher outputs\n";
        for (int m = 0; m < samples; ++m) {
            for (int i = 0; i < n; ++i)
                df << (i ? "\t" : "") << format_double(x_train(m, i, 0));
            for (int j = 0; j < n; ++j)
                df << "\t" << format_double(y_train(m, j, 0));
            df << "\n";
        }
    }

    {
        std::ofstream cf(dir / "train_config.json");
        cf << "{\n"
              "  \"num_features\": 1,\n"
              "  \"init_seed\": 42,\n"
              "  \"layers\": [\n"
              "    {\"num_filters\": 1, \"selfloop_value\": 1.0, "
              "\"activation\": \"identity\", \"use_bias\": true, \"pool\": null}\n"
              "  ],\n"
              "  \"train\": {\"learning_rate\": 0.15, \"epochs\": 500, "
              "\"batch_size\": 0, \"seed\": 7}\n"
              "}\n";
    }

    BatchTensor x_eval(4, n, 1);
    for (double& v : x_eval.data()) v = uniform(rng, -1.0, 1.0);
    write_batch(x_eval, dir / "eval_input.txt");
    BatchTensor y_eval = forward_dense(wt, x_eval, tl.params().bias,
                                       cfg.activation, cfg.pool);
    write_batch(y_eval, dir / "eval_golden.txt");

    // Sanity: the committed config must actually fit the committed data.
    GinnModel student;
    student.add_layer(GILayer::build(from_edge_list(edges, all, all), cfg, 1, 42));
    TrainConfig tc;
    tc.learning_rate = 0.15;
    tc.epochs = 500;
    tc.seed = 7;
    std::vector<double> history = train_mse(student, x_train, y_train, tc);
    double final_mse = 0.0;
    {
        BatchTensor pred = student.forward(x_train);
        double s = 0.0;
        auto pa = pred.data();
        auto pb = y_train.data();
        for (std::size_t i = 0; i < pa.size(); ++i)
            s += (pa[i] - pb[i]) * (pa[i] - pb[i]);
        final_mse = s / static_cast<double>(pa.size());
    }
    std::cout << "fixtures written to " << dir.string() << "\n";
    std::cout << "student sanity: half-loss " << format_double(history.back())
              << " after " << history.size() << " epochs, final MSE "
              << format_double(final_mse) << "\n";
    if (final_mse >= 1e-3) {
        std::cerr << "error: fixture training does not converge below 1e-3\n";
        return 1;
    }
    return 0;
}
