#include "mirrornet/clustering.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "mirrornet/errors.hpp"
#include "mirrornet/io_util.hpp"
#include "mirrornet/rng.hpp"

namespace mirrornet {

void ClusterConfig::validate() const {
    if (k < 1) throw InvalidValue("k must be >= 1");
    if (min_seed_distance < 0.0) throw InvalidValue("min_seed_distance must be >= 0");
    if (max_iterations < 1) throw InvalidValue("max_iterations must be >= 1");
    if (max_seed_attempts < 1) throw InvalidValue("max_seed_attempts must be >= 1");
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw ShapeError("euclidean_distance: lengths " + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

namespace {

void check_codes(const std::vector<Code>& codes) {
    if (codes.empty()) throw EmptyDataset("no codes to cluster");
    for (const Code& c : codes) {
        if (c.size() != codes.front().size()) {
            throw ShapeError("codes of mixed dimension: " + std::to_string(c.size()) +
                             " vs " + std::to_string(codes.front().size()));
        }
    }
}

bool far_from_all(const Code& candidate, const std::vector<Code>& chosen, double min_dist) {
    for (const Code& s : chosen) {
        if (!(euclidean_distance(candidate, s) > min_dist)) return false;
    }
    return true;
}

} // namespace

std::vector<Code> select_seeds(const std::vector<Code>& codes, const ClusterConfig& config) {
    config.validate();
    check_codes(codes);
    if (codes.size() < config.k) {
        throw ShapeError("need at least k=" + std::to_string(config.k) + " codes, got " +
                         std::to_string(codes.size()));
    }
    SplitMix64 rng(config.rng_seed);
    std::vector<Code> seeds;
    seeds.reserve(config.k);
    seeds.push_back(codes[rng.next_below(codes.size())]);
    while (seeds.size() < config.k) {
        bool placed = false;
        for (std::size_t attempt = 0; attempt < config.max_seed_attempts; ++attempt) {
            const Code& candidate = codes[rng.next_below(codes.size())];
            if (far_from_all(candidate, seeds, config.min_seed_distance)) {
                seeds.push_back(candidate);
                placed = true;
                break;
            }
        }
        if (!placed) {
            for (const Code& candidate : codes) {
                if (far_from_all(candidate, seeds, config.min_seed_distance)) {
                    seeds.push_back(candidate);
                    placed = true;
                    break;
                }
            }
        }
        if (!placed) {
            throw SeedSelectionFailure(
                "placed " + std::to_string(seeds.size()) + " of " + std::to_string(config.k) +
                    " seeds: no remaining code is farther than " +
                    std::to_string(config.min_seed_distance) + " from all chosen seeds",
                seeds.size());
        }
    }
    return seeds;
}

std::vector<std::size_t> assign(const std::vector<Code>& codes,
                                const std::vector<Code>& centroids) {
    check_codes(codes);
    if (centroids.empty()) throw ShapeError("assign: no centroids");
    std::vector<std::size_t> out(codes.size());
    for (std::size_t i = 0; i < codes.size(); ++i) {
        std::size_t best = 0;
        double best_dist = euclidean_distance(codes[i], centroids[0]);
        for (std::size_t j = 1; j < centroids.size(); ++j) {
            const double d = euclidean_distance(codes[i], centroids[j]);
            if (d < best_dist) {
                best_dist = d;
                best = j;
            }
        }
        out[i] = best;
    }
    return out;
}

std::vector<Code> update_centroids(const std::vector<Code>& codes,
                                   const std::vector<std::size_t>& assignments,
                                   const std::vector<Code>& previous_centroids) {
    check_codes(codes);
    if (assignments.size() != codes.size()) {
        throw ShapeError("update_centroids: " + std::to_string(assignments.size()) +
                         " assignments for " + std::to_string(codes.size()) + " codes");
    }
    const std::size_t k = previous_centroids.size();
    const std::size_t dim = codes.front().size();
    std::vector<Code> centroids(k, Code(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < codes.size(); ++i) {
        if (assignments[i] >= k) {
            throw ShapeError("assignment " + std::to_string(assignments[i]) +
                             " out of range for k=" + std::to_string(k));
        }
        Code& c = centroids[assignments[i]];
        for (std::size_t d = 0; d < dim; ++d) c[d] += codes[i][d];
        ++counts[assignments[i]];
    }
    for (std::size_t j = 0; j < k; ++j) {
        if (counts[j] == 0) {
            centroids[j] = previous_centroids[j];
        } else {
            for (double& v : centroids[j]) v /= static_cast<double>(counts[j]);
        }
    }
    return centroids;
}

ClusterModel forgy_cluster_from_seeds(const std::vector<Code>& codes,
                                      std::vector<Code> seeds, std::size_t max_iterations) {
    check_codes(codes);
    ClusterModel model;
    model.centroids = std::move(seeds);
    model.assignments = assign(codes, model.centroids);
    while (model.iterations_run < max_iterations) {
        model.centroids = update_centroids(codes, model.assignments, model.centroids);
        std::vector<std::size_t> next = assign(codes, model.centroids);
        ++model.iterations_run;
        if (next == model.assignments) {
            model.converged = true;
            break;
        }
        model.assignments = std::move(next);
    }
    return model;
}

ClusterModel forgy_cluster(const std::vector<Code>& codes, const ClusterConfig& config) {
    return forgy_cluster_from_seeds(codes, select_seeds(codes, config),
                                    config.max_iterations);
}

void write_codes(const std::filesystem::path& path, const std::vector<Code>& codes) {
    atomic_write(path, [&](std::ostream& out) {
        for (const Code& c : codes) {
            for (std::size_t i = 0; i < c.size(); ++i) {
                if (i) out << ',';
                out << format_double(c[i]);
            }
            out << '\n';
        }
    });
}

std::vector<Code> read_codes(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open codes file: " + path.string());
    std::vector<Code> codes;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        Code c;
        const char* p = line.c_str();
        while (true) {
            char* end = nullptr;
            const double v = std::strtod(p, &end);
            if (end == p) {
                throw FormatError(path.string() + ":" + std::to_string(line_no) +
                                  ": expected a number, found '" + std::string(p) + "'");
            }
            c.push_back(v);
            p = end;
            while (*p == ' ' || *p == '\t') ++p;
            if (*p == '\0') break;
            if (*p != ',') {
                throw FormatError(path.string() + ":" + std::to_string(line_no) +
                                  ": expected ',', found '" + std::string(p) + "'");
            }
            ++p;
        }
        if (!codes.empty() && c.size() != codes.front().size()) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": dimension " + std::to_string(c.size()) +
                              " differs from first line's " +
                              std::to_string(codes.front().size()));
        }
        codes.push_back(std::move(c));
    }
    return codes;
}

void write_assignments(const std::filesystem::path& path,
                       const std::vector<AssignmentRecord>& records) {
    atomic_write(path, [&](std::ostream& out) {
        for (const AssignmentRecord& r : records) {
            out << r.source_id << ',' << r.cluster << '\n';
        }
    });
}

std::vector<AssignmentRecord> read_assignments(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open assignments file: " + path.string());
    std::vector<AssignmentRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::size_t comma = line.rfind(',');
        if (comma == std::string::npos) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": expected '<source_id>,<cluster_index>'");
        }
        AssignmentRecord r;
        r.source_id = line.substr(0, comma);
        try {
            std::size_t pos = 0;
            const std::string idx = line.substr(comma + 1);
            const long long v = std::stoll(idx, &pos);
            if (pos != idx.size() || v < 0) throw std::invalid_argument(idx);
            r.cluster = static_cast<std::size_t>(v);
        } catch (const std::exception&) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": bad cluster index in '" + line + "'");
        }
        records.push_back(std::move(r));
    }
    return records;
}

} // namespace mirrornet
