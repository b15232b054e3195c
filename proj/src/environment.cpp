#include "squint/environment.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "squint/errors.hpp"
#include "squint/overloaded.hpp"

namespace squint {

namespace {

// Uniform double in [0, 1) from the top 53 bits.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::vector<LossVector> read_replay(const std::filesystem::path& file, std::size_t n) {
    std::ifstream in(file);
    if (!in) throw DomainError("replay: cannot open " + file.string());

    std::vector<LossVector> rows;
    std::vector<std::size_t> columns;  // which CSV cells hold loss_1..loss_N
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::vector<std::string> cells = split_csv(line);
        double probe = 0.0;
        if (!header_seen && !parse_double(cells.front(), probe)) {
            header_seen = true;
            for (std::size_t i = 1; i <= n; ++i) {
                const auto it = std::find(cells.begin(), cells.end(), "loss_" + std::to_string(i));
                if (it == cells.end()) break;
                columns.push_back(static_cast<std::size_t>(it - cells.begin()));
            }
            if (!columns.empty() && columns.size() != n) {
                throw DomainError("replay: " + file.string() + " header has " + std::to_string(columns.size()) +
                                  " loss columns, expected " + std::to_string(n));
            }
            continue;
        }
        header_seen = true;
        if (columns.empty()) {
            if (cells.size() != n) {
                throw DomainError("replay: " + file.string() + ":" + std::to_string(line_no) + " has " +
                                  std::to_string(cells.size()) + " values, expected " + std::to_string(n));
            }
            for (std::size_t i = 0; i < n; ++i) columns.push_back(i);
        }
        std::vector<double> losses(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (columns[i] >= cells.size() || !parse_double(cells[columns[i]], losses[i])) {
                throw DomainError("replay: " + file.string() + ":" + std::to_string(line_no) + " malformed value");
            }
        }
        try {
            rows.emplace_back(std::move(losses));
        } catch (const DomainError& e) {
            throw DomainError("replay: " + file.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return rows;
}

LossEnvironment::LossEnvironment(const ExperimentConfig& cfg) : n_(cfg.N), seed_(cfg.seed), spec_(cfg.environment) {
    if (const auto* r = std::get_if<Replay>(&spec_)) replay_ = read_replay(r->path, n_);
}

LossVector LossEnvironment::generate(std::int64_t t, const WeightVector& current) const {
    if (t < 1) throw DomainError("generate: rounds are 1-based");
    std::mt19937_64 rng(splitmix64(seed_ ^ splitmix64(static_cast<std::uint64_t>(t))));
    std::vector<double> loss(n_, 0.0);

    std::visit(overloaded{[&](const IidUniform&) {
                              for (double& x : loss) x = unit(rng);
                          },
                          [&](const IidBernoulli& b) {
                              for (std::size_t i = 0; i < n_; ++i) loss[i] = unit(rng) < b.means[i] ? 1.0 : 0.0;
                          },
                          [&](const FixedGap& g) {
                              for (std::size_t i = 0; i < n_; ++i) {
                                  const double base = i == 0 ? 0.5 - 0.5 * g.gap : 0.5 + 0.5 * g.gap;
                                  const double jitter = g.noise > 0.0 ? g.noise * (2.0 * unit(rng) - 1.0) : 0.0;
                                  loss[i] = std::clamp(base + jitter, 0.0, 1.0);
                              }
                          },
                          [&](const AdversarialAlternating&) {
                              if (current.size() != n_) throw LengthError("generate: weight length mismatch");
                              const auto top = std::max_element(current.values().begin(), current.values().end());
                              loss[static_cast<std::size_t>(top - current.values().begin())] = 1.0;
                          },
                          [&](const Replay& r) {
                              if (static_cast<std::size_t>(t) > replay_.size()) {
                                  throw DomainError("replay: " + r.path.string() + " exhausted at round " +
                                                    std::to_string(t));
                              }
                              const auto values = replay_[static_cast<std::size_t>(t - 1)].values();
                              loss.assign(values.begin(), values.end());
                          }},
               spec_);
    return LossVector(std::move(loss));
}

}  // namespace squint
