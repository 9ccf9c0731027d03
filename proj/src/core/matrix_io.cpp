#include "opshift/core/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace opshift {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what)
{
    throw ParseError("matrix text, line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& token, std::size_t line)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &used);
    } catch (const std::exception&) {
        fail(line, "not a number: '" + token + "'");
    }
    if (used != token.size()) {
        fail(line, "not a number: '" + token + "'");
    }
    return v;
}

Index parse_dimension(const std::string& token, std::size_t line)
{
    long long v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size() || v <= 0) {
        fail(line, "invalid dimension '" + token + "'");
    }
    return static_cast<Index>(v);
}

}  // namespace

void write_matrix(std::ostream& out, const ComplexMatrix& m, MatrixKind kind)
{
    if (kind == MatrixKind::hermitian) {
        require_shape(m.rows() == m.cols(), "write_matrix: hermitian matrix must be square");
        out << "hermitian " << m.rows() << '\n';
    } else {
        out << "dense " << m.rows() << ' ' << m.cols() << '\n';
    }
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::setprecision(17);
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j > 0) {
                out << ' ';
            }
            out << m(i, j).real() << ' ' << m(i, j).imag();
        }
        out << '\n';
    }
    out.flags(flags);
    out.precision(precision);
}

MatrixRecord read_matrix(std::istream& in)
{
    std::string header;
    std::size_t line_no = 1;
    while (std::getline(in, header)) {
        if (header.find_first_not_of(" \t\r") != std::string::npos) {
            break;
        }
        ++line_no;
    }
    std::istringstream hs(header);
    std::string kind_token;
    hs >> kind_token;

    MatrixRecord rec;
    Index rows = 0;
    Index cols = 0;
    std::string a;
    std::string b;
    std::string extra;
    if (kind_token == "hermitian") {
        rec.kind = MatrixKind::hermitian;
        if (!(hs >> a) || (hs >> extra)) {
            fail(line_no, "expected 'hermitian <n>'");
        }
        rows = cols = parse_dimension(a, line_no);
    } else if (kind_token == "dense") {
        rec.kind = MatrixKind::dense;
        if (!(hs >> a >> b) || (hs >> extra)) {
            fail(line_no, "expected 'dense <rows> <cols>'");
        }
        rows = parse_dimension(a, line_no);
        cols = parse_dimension(b, line_no);
    } else {
        fail(line_no, "unknown matrix kind '" + kind_token + "'");
    }

    const std::size_t expected = static_cast<std::size_t>(rows * cols);
    std::vector<Complex> values;
    values.reserve(expected);
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::vector<std::string> tokens;
        std::string t;
        while (ls >> t) {
            tokens.push_back(t);
        }
        if (tokens.empty()) {
            continue;
        }
        if (tokens.size() % 2 != 0) {
            fail(line_no, "odd number of values; entries are 're im' pairs");
        }
        for (std::size_t k = 0; k < tokens.size(); k += 2) {
            if (values.size() == expected) {
                fail(line_no, "more entries than the declared shape " + std::to_string(rows) + "x" +
                                  std::to_string(cols));
            }
            values.emplace_back(parse_double(tokens[k], line_no), parse_double(tokens[k + 1], line_no));
        }
    }
    if (values.size() != expected) {
        fail(line_no, "expected " + std::to_string(expected) + " entries, found " + std::to_string(values.size()));
    }
    rec.entries.resize(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            rec.entries(i, j) = values[static_cast<std::size_t>(i * cols + j)];
        }
    }
    return rec;
}

void save_matrix(const std::filesystem::path& path, const ComplexMatrix& m, MatrixKind kind)
{
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    write_matrix(out, m, kind);
    if (!out) {
        throw Error("failed writing " + path.string());
    }
}

MatrixRecord load_matrix(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    return read_matrix(in);
}

}  // namespace opshift
