#include "ginn/data_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ginn/errors.hpp"

namespace ginn {

std::vector<std::vector<double>> read_numeric_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError(path.string() + ": cannot open file");

    std::vector<std::vector<double>> table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.starts_with('#') ||
            std::all_of(line.begin(), line.end(),
                        [](unsigned char c) { return std::isspace(c); }))
            continue;
        std::istringstream fields(line);
        std::vector<double> row;
        double v;
        while (fields >> v) row.push_back(v);
        if (!fields.eof())
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": non-numeric field");
        if (!table.empty() && row.size() != table.front().size())
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": row has " +
                             std::to_string(row.size()) + " columns, expected " +
                             std::to_string(table.front().size()));
        table.push_back(std::move(row));
    }
    return table;
}

BatchTensor table_to_batch(const std::vector<std::vector<double>>& table, int nodes,
                           int channels, const std::string& what) {
    const std::size_t expected = static_cast<std::size_t>(nodes) * channels;
    if (!table.empty() && table.front().size() != expected)
        throw ShapeError(what + ": rows have " + std::to_string(table.front().size()) +
                         " columns, expected " + std::to_string(nodes) + " nodes x " +
                         std::to_string(channels) + " features = " + std::to_string(expected));
    BatchTensor out(static_cast<int>(table.size()), nodes, channels);
    for (std::size_t m = 0; m < table.size(); ++m)
        for (int i = 0; i < nodes; ++i)
            for (int c = 0; c < channels; ++c)
                out(static_cast<int>(m), i, c) =
                    table[m][static_cast<std::size_t>(i) * channels + c];
    return out;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_batch(const BatchTensor& t, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ParseError(path.string() + ": cannot open file for writing");
    for (int m = 0; m < t.dim0(); ++m) {
        for (int i = 0; i < t.dim1(); ++i) {
            for (int c = 0; c < t.dim2(); ++c) {
                if (i != 0 || c != 0) out << '\t';
                out << format_double(t(m, i, c));
            }
        }
        out << '\n';
    }
    if (!out)
        throw ParseError(path.string() + ": write failed");
}

} // namespace ginn
