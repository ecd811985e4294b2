#include "gradctl/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gradctl::csv {

std::string format_double(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary); // '\n' line endings everywhere
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

double parse_double(const std::string& tok) {
    if (tok == "inf")
        return std::numeric_limits<double>::infinity();
    if (tok == "-inf")
        return -std::numeric_limits<double>::infinity();
    if (tok == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    return std::stod(tok);
}

std::vector<std::vector<double>> read_rows(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open for reading: " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string tok;
        bool numeric = true;
        while (std::getline(ss, tok, ',')) {
            try {
                row.push_back(parse_double(tok));
            } catch (const std::exception&) {
                numeric = false; // header row
                break;
            }
        }
        if (numeric && !row.empty())
            rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

void write_matrix(const std::filesystem::path& path, const Matrix& m, const std::string& header) {
    std::ofstream out = open_out(path);
    if (!header.empty())
        out << header << '\n';
    for (long i = 0; i < m.rows(); ++i) {
        for (long j = 0; j < m.cols(); ++j) {
            if (j)
                out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

Matrix read_matrix(const std::filesystem::path& path) {
    const auto rows = read_rows(path);
    if (rows.empty())
        return Matrix(0, 0);
    Matrix m(static_cast<long>(rows.size()), static_cast<long>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.front().size())
            throw std::runtime_error("ragged CSV: " + path.string());
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<long>(i), static_cast<long>(j)) = rows[i][j];
    }
    return m;
}

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj) {
    std::ofstream out = open_out(path);
    out << "t";
    for (long j = 0; j < traj.states.cols(); ++j)
        out << ",x" << (j + 1);
    for (long j = 0; j < traj.commands.cols(); ++j)
        out << ",u" << (j + 1);
    out << ",cumulative_cost\n";
    for (long i = 0; i < traj.size(); ++i) {
        out << format_double(traj.times(i));
        for (long j = 0; j < traj.states.cols(); ++j)
            out << ',' << format_double(traj.states(i, j));
        for (long j = 0; j < traj.commands.cols(); ++j)
            out << ',' << format_double(traj.commands(i, j));
        out << ',' << format_double(traj.cumulative_cost(i)) << '\n';
    }
}

void write_samples(const std::filesystem::path& path, const std::vector<GradientSample>& samples) {
    std::ofstream out = open_out(path);
    if (samples.empty())
        return;
    const long nx = samples.front().state.size();
    for (long j = 0; j < nx; ++j)
        out << (j ? "," : "") << 'x' << (j + 1);
    for (long j = 0; j < nx; ++j)
        out << ",g" << (j + 1);
    out << '\n';
    for (const GradientSample& s : samples) {
        for (long j = 0; j < nx; ++j)
            out << (j ? "," : "") << format_double(s.state(j));
        for (long j = 0; j < nx; ++j)
            out << ',' << format_double(s.grad(j));
        out << '\n';
    }
}

void write_weights(const std::filesystem::path& path, const RowVec& w) {
    write_matrix(path, Matrix(w));
}

RowVec read_weights(const std::filesystem::path& path) {
    const Matrix m = read_matrix(path);
    if (m.rows() != 1)
        throw std::runtime_error("weight file must hold a single row: " + path.string());
    return RowVec(m.row(0));
}

} // namespace gradctl::csv
