#include "squint/trace_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "squint/errors.hpp"

namespace squint {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_trace_csv(std::ostream& out, std::span<const RoundRecord> trace) {
    const std::size_t n = trace.empty() ? 0 : trace.front().p.size();
    out << "t,learner_loss,v_shared,potential_sum";
    for (std::size_t i = 1; i <= n; ++i) out << ",p_" << i;
    for (std::size_t i = 1; i <= n; ++i) out << ",loss_" << i;
    out << '\n';
    for (const RoundRecord& row : trace) {
        out << row.t << ',' << format_double(row.learner_loss) << ',';
        if (row.v_shared) out << format_double(*row.v_shared);
        out << ',' << format_double(row.potential_sum);
        for (double p : row.p.values()) out << ',' << format_double(p);
        for (double l : row.loss.values()) out << ',' << format_double(l);
        out << '\n';
    }
}

void write_trace_csv(const std::filesystem::path& file, std::span<const RoundRecord> trace) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw DomainError("trace: cannot write " + file.string());
    write_trace_csv(out, trace);
    if (!out) throw DomainError("trace: write failed for " + file.string());
}

namespace {

double to_double(const std::string& s, std::size_t line_no) {
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw DomainError("trace: line " + std::to_string(line_no) + ": bad number \"" + s + "\"");
    }
    return x;
}

}  // namespace

std::vector<RoundRecord> read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) return {};
    // Columns after the four fixed ones are p_1..p_N then loss_1..loss_N.
    std::size_t cols = 1;
    for (char c : line) cols += c == ',';
    if (cols < 6 || (cols - 4) % 2 != 0) throw DomainError("trace: malformed header");
    const std::size_t n = (cols - 4) / 2;

    std::vector<RoundRecord> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ss(line);
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        if (cells.size() != cols) throw DomainError("trace: line " + std::to_string(line_no) + ": wrong column count");

        std::vector<double> p(n), loss(n);
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = to_double(cells[4 + i], line_no);
            loss[i] = to_double(cells[4 + n + i], line_no);
        }
        RoundRecord row{.t = std::stoll(cells[0]),
                        .p = WeightVector(std::move(p)),
                        .loss = LossVector(std::move(loss)),
                        .learner_loss = to_double(cells[1], line_no),
                        .r = {},
                        .v_shared = std::nullopt,
                        .potential_sum = to_double(cells[3], line_no),
                        .root_residual = std::nullopt};
        if (!cells[2].empty()) row.v_shared = to_double(cells[2], line_no);
        row.r = instantaneous_regret(row.p, row.loss);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<RoundRecord> read_trace_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw DomainError("trace: cannot open " + file.string());
    return read_trace_csv(in);
}

}  // namespace squint
