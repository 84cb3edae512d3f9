#include "mirrornet/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "mirrornet/errors.hpp"
#include "mirrornet/io_util.hpp"

namespace mirrornet {

namespace {

constexpr const char* kMagic = "MMNN 1";

void write_row(std::ostream& out, std::span<const double> row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ' ';
        out << format_double(row[i]);
    }
    out << '\n';
}

// Line-oriented reader that tracks line numbers for error messages.
class LineReader {
public:
    LineReader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

    std::string next_line() {
        std::string line;
        if (!std::getline(in_, line)) {
            throw FormatError(name_ + ":" + std::to_string(line_no_ + 1) +
                              ": unexpected end of file");
        }
        ++line_no_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    }

    bool at_eof() {
        return in_.peek() == std::char_traits<char>::eof();
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw FormatError(name_ + ":" + std::to_string(line_no_) + ": " + msg);
    }

private:
    std::istream& in_;
    std::string name_;
    std::size_t line_no_ = 0;
};

std::vector<double> parse_numbers(LineReader& reader, const std::string& line,
                                  std::size_t expected) {
    std::vector<double> out;
    out.reserve(expected);
    const char* p = line.c_str();
    while (*p != '\0') {
        char* end = nullptr;
        const double v = std::strtod(p, &end);
        if (end == p) {
            reader.fail("expected a number, found '" + std::string(p) + "'");
        }
        if (!std::isfinite(v)) {
            reader.fail("non-finite number in model file");
        }
        out.push_back(v);
        p = end;
        while (*p == ' ' || *p == '\t') ++p;
    }
    if (out.size() != expected) {
        reader.fail("expected " + std::to_string(expected) + " numbers, found " +
                    std::to_string(out.size()));
    }
    return out;
}

} // namespace

void save_model(const Network& net, const std::filesystem::path& path) {
    atomic_write(path, [&](std::ostream& out) {
        out << kMagic << '\n';
        for (std::size_t i = 0; i < net.shape.layer_sizes.size(); ++i) {
            if (i) out << ' ';
            out << net.shape.layer_sizes[i];
        }
        out << '\n';
        for (std::size_t l = 0; l < net.shape.depth(); ++l) {
            const Matrix& w = net.weights[l];
            out << "W " << w.rows << ' ' << w.cols << '\n';
            for (std::size_t r = 0; r < w.rows; ++r) write_row(out, w.row(r));
            out << "B " << net.biases[l].size() << '\n';
            write_row(out, net.biases[l]);
        }
    });
}

Network load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoFailure("cannot open model: " + path.string());
    }
    LineReader reader(in, path.string());

    if (reader.next_line() != kMagic) {
        reader.fail(std::string("bad magic, expected '") + kMagic + "'");
    }

    Network net;
    {
        const std::string line = reader.next_line();
        std::istringstream ss(line);
        long long v = 0;
        while (ss >> v) {
            if (v <= 0) reader.fail("layer sizes must be positive");
            net.shape.layer_sizes.push_back(static_cast<std::size_t>(v));
        }
        if (!ss.eof()) reader.fail("malformed layer size line");
        try {
            net.shape.validate();
        } catch (const ShapeError& e) {
            reader.fail(e.what());
        }
    }

    for (std::size_t l = 0; l < net.shape.depth(); ++l) {
        const std::size_t rows = net.shape.layer_sizes[l + 1];
        const std::size_t cols = net.shape.layer_sizes[l];
        {
            std::ostringstream expect;
            expect << "W " << rows << ' ' << cols;
            const std::string line = reader.next_line();
            if (line != expect.str()) {
                reader.fail("expected '" + expect.str() + "', found '" + line + "'");
            }
        }
        Matrix w(rows, cols);
        for (std::size_t r = 0; r < rows; ++r) {
            const std::vector<double> nums = parse_numbers(reader, reader.next_line(), cols);
            std::copy(nums.begin(), nums.end(), w.row(r).begin());
        }
        net.weights.push_back(std::move(w));
        {
            std::ostringstream expect;
            expect << "B " << rows;
            const std::string line = reader.next_line();
            if (line != expect.str()) {
                reader.fail("expected '" + expect.str() + "', found '" + line + "'");
            }
        }
        net.biases.push_back(parse_numbers(reader, reader.next_line(), rows));
    }

    // Trailing blank lines are tolerated; anything else is an error.
    while (!reader.at_eof()) {
        const std::string line = reader.next_line();
        if (!line.empty()) reader.fail("unexpected trailing content: '" + line + "'");
    }
    return net;
}

} // namespace mirrornet
