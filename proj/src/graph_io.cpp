#include "ginn/graph_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "ginn/errors.hpp"

namespace ginn {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, int line, const std::string& what) {
    throw ParseError(path.string() + ":" + std::to_string(line) + ": " + what);
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return std::isspace(c); });
}

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

} // namespace

GraphData read_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError(path.string() + ": cannot open file");

    GraphData g;
    int max_index = -1;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line) || line.starts_with('#')) continue;
        std::istringstream fields(line);
        long long i = -1;
        long long j = -1;
        double value = 1.0;
        if (!(fields >> i >> j))
            fail(path, line_no, "expected `i j [value]`, got \"" + line + "\"");
        if (i < 0 || j < 0)
            fail(path, line_no, "negative node index");
        fields >> value; // optional third field
        std::string trailing;
        if (fields >> trailing)
            fail(path, line_no, "unexpected trailing field \"" + trailing + "\"");
        g.edges.push_back({static_cast<int>(i), static_cast<int>(j), value});
        max_index = std::max({max_index, static_cast<int>(i), static_cast<int>(j)});
    }
    g.rows = g.cols = max_index + 1;
    return g;
}

GraphData read_matrix_market(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError(path.string() + ": cannot open file");

    std::string banner;
    if (!std::getline(in, banner))
        throw ParseError(path.string() + ":1: empty file");
    std::istringstream header(lowercase(banner));
    std::string magic, object, format, field, symmetry;
    header >> magic >> object >> format >> field >> symmetry;
    if (magic != "%%matrixmarket")
        fail(path, 1, "missing %%MatrixMarket banner");
    if (object != "matrix" || format != "coordinate")
        fail(path, 1, "only `matrix coordinate` files are supported");
    if (field != "real" && field != "pattern" && field != "integer")
        fail(path, 1, "unsupported field `" + field + "` (want real or pattern)");
    if (symmetry != "general" && symmetry != "symmetric")
        fail(path, 1, "unsupported symmetry `" + symmetry + "`");
    const bool pattern = field == "pattern";
    const bool symmetric = symmetry == "symmetric";

    std::string line;
    int line_no = 1;
    long long rows = 0, cols = 0, declared_nnz = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line) || line.starts_with('%')) continue;
        std::istringstream sizes(line);
        if (!(sizes >> rows >> cols >> declared_nnz))
            fail(path, line_no, "expected `rows cols nnz` size line");
        break;
    }
    if (rows <= 0 || cols <= 0)
        fail(path, line_no, "matrix dimensions must be positive");

    GraphData g;
    g.rows = static_cast<int>(rows);
    g.cols = static_cast<int>(cols);
    long long seen = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line) || line.starts_with('%')) continue;
        std::istringstream fields(line);
        long long i = 0, j = 0;
        double value = 1.0;
        if (!(fields >> i >> j))
            fail(path, line_no, "expected coordinate entry");
        if (!pattern && !(fields >> value))
            fail(path, line_no, "missing value on real entry");
        if (i < 1 || i > rows || j < 1 || j > cols)
            fail(path, line_no, "1-based index out of declared bounds");
        const int r = static_cast<int>(i - 1);
        const int c = static_cast<int>(j - 1);
        g.edges.push_back({r, c, value});
        if (symmetric && r != c)
            g.edges.push_back({c, r, value});
        ++seen;
    }
    if (seen != declared_nnz)
        throw ParseError(path.string() + ": header declares " + std::to_string(declared_nnz) +
                         " entries, file has " + std::to_string(seen));
    return g;
}

GraphData load_graph(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError(path.string() + ": cannot open file");
    std::string first;
    std::getline(in, first);
    in.close();
    if (lowercase(first).starts_with("%%matrixmarket"))
        return read_matrix_market(path);
    return read_edge_list(path);
}

} // namespace ginn
