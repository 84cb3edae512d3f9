#ifndef MIRRORNET_CLUSTERING_HPP
#define MIRRORNET_CLUSTERING_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mirrornet/network.hpp"

namespace mirrornet {

struct ClusterConfig {
    std::size_t k = 2;
    // Every pair of initial seeds must be strictly farther apart than this.
    double min_seed_distance = 1.3;
    std::size_t max_iterations = 500;
    std::uint64_t rng_seed = 0;
    // Random draws tried per seed before falling back to an exhaustive scan.
    std::size_t max_seed_attempts = 1000;

    void validate() const;
};

struct ClusterModel {
    std::vector<Code> centroids;
    std::vector<std::size_t> assignments;
    // Completed (recompute centroids + reassign) rounds after the initial
    // seeding pass; the round that confirms stable membership counts.
    std::size_t iterations_run = 0;
    bool converged = false;
};

double euclidean_distance(std::span<const double> a, std::span<const double> b);

// Picks k seeds from the data: the first uniformly at random, each later
// one by random draws until a point strictly farther than
// min_seed_distance from every chosen seed appears. After
// max_seed_attempts fruitless draws a final exhaustive scan (in index
// order) runs; if that also fails, throws SeedSelectionFailure recording
// how many seeds were placed.
std::vector<Code> select_seeds(const std::vector<Code>& codes, const ClusterConfig& config);

// Nearest-centroid assignment; ties go to the lowest centroid index.
std::vector<std::size_t> assign(const std::vector<Code>& codes,
                                const std::vector<Code>& centroids);

// Arithmetic mean per cluster; a cluster with no members keeps its
// previous centroid.
std::vector<Code> update_centroids(const std::vector<Code>& codes,
                                   const std::vector<std::size_t>& assignments,
                                   const std::vector<Code>& previous_centroids);

// Forgy's algorithm: seed selection, one seeding assignment pass, then
// rounds of centroid recomputation + reassignment until a round changes
// no membership (converged) or max_iterations rounds have run.
ClusterModel forgy_cluster(const std::vector<Code>& codes, const ClusterConfig& config);

// Same iteration starting from caller-supplied seeds.
ClusterModel forgy_cluster_from_seeds(const std::vector<Code>& codes,
                                      std::vector<Code> seeds, std::size_t max_iterations);

// Codes / centroids file: one vector per line, comma-separated decimals
// with 17 significant digits (bit round-trippable).
void write_codes(const std::filesystem::path& path, const std::vector<Code>& codes);
std::vector<Code> read_codes(const std::filesystem::path& path);

// Assignments file: one `<source_id>,<cluster_index>` line per input.
struct AssignmentRecord {
    std::string source_id;
    std::size_t cluster = 0;
};
void write_assignments(const std::filesystem::path& path,
                       const std::vector<AssignmentRecord>& records);
std::vector<AssignmentRecord> read_assignments(const std::filesystem::path& path);

} // namespace mirrornet

#endif // MIRRORNET_CLUSTERING_HPP
