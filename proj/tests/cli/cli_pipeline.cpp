// End-to-end checks of the mirrornet CLI binary (path passed as argv[1]):
// exercises the gen-corpus -> train -> encode -> cluster -> eval pipeline,
// byte-identical retraining, the published-arithmetic eval path, frozen-
// centroid assignment, reconstruction output, and error reporting.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "temp_dir.hpp"

namespace fs = std::filesystem;

namespace {

int failures = 0;

#define CHECK_TRUE(cond, what)                                                    \
    do {                                                                          \
        if (!(cond)) {                                                            \
            std::cerr << "FAIL " << __FILE__ << ":" << __LINE__ << ": " << what   \
                      << std::endl;                                               \
            ++failures;                                                           \
        }                                                                         \
    } while (0)

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return {};
    return std::string(std::istreambuf_iterator<char>(in), {});
}

RunResult run(const std::string& cli, const std::string& args, const fs::path& dir) {
    const fs::path out_file = dir / "stdout.txt";
    const fs::path err_file = dir / "stderr.txt";
    const std::string cmd =
        cli + " " + args + " >" + out_file.string() + " 2>" + err_file.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

// Value of a `key=value` line in command output, or "" when absent.
std::string metric(const std::string& text, const std::string& key) {
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
    }
    return {};
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_pipeline <path-to-mirrornet-binary>" << std::endl;
        return 2;
    }
    const std::string cli = argv[1];
    testutil::TempDir dir("cli");
    const fs::path work = dir.path();

    // --- full pipeline on a small 3-class corpus ---------------------------
    {
        RunResult r = run(cli,
                          "gen-corpus --out " + (work / "corpus").string() +
                              " --classes 3 --per-class-train 12 --per-class-test 5"
                              " --noise 6 --seed 11",
                          work);
        CHECK_TRUE(r.exit_code == 0, "gen-corpus failed: " << r.err);
        CHECK_TRUE(metric(r.out, "n_train") == "36", "expected 36 train images");
        CHECK_TRUE(metric(r.out, "n_test") == "15", "expected 15 test images");

        const std::string train_manifest = (work / "corpus/train_manifest.txt").string();
        r = run(cli,
                "train --manifest " + train_manifest + " --out " +
                    (work / "model.txt").string() +
                    " --shape 676,16,8,676 --seed 5 --lr 0.02 --max-epochs 60"
                    " --mirror-threshold 0.3 --log-every 0",
                work);
        CHECK_TRUE(r.exit_code == 0, "train failed: " << r.err);
        CHECK_TRUE(!metric(r.out, "epochs_run").empty(), "train prints epochs_run");
        CHECK_TRUE(fs::exists(work / "model.txt"), "model file written");

        r = run(cli,
                "encode --model " + (work / "model.txt").string() + " --manifest " +
                    train_manifest + " --out " + (work / "codes.csv").string(),
                work);
        CHECK_TRUE(r.exit_code == 0, "encode failed: " << r.err);
        CHECK_TRUE(metric(r.out, "dim") == "8", "bottleneck dim is 8");

        r = run(cli,
                "cluster --codes " + (work / "codes.csv").string() + " --k 3" +
                    " --min-seed-distance 0.2 --seed 3 --manifest " + train_manifest +
                    " --centroids-out " + (work / "centroids.csv").string() + " --out " +
                    (work / "assign.csv").string(),
                work);
        CHECK_TRUE(r.exit_code == 0, "cluster failed: " << r.err);
        CHECK_TRUE(metric(r.out, "converged") == "true", "forgy converged");

        r = run(cli,
                "eval --assignments " + (work / "assign.csv").string() + " --manifest " +
                    train_manifest + " --out " + (work / "report.txt").string(),
                work);
        CHECK_TRUE(r.exit_code == 0, "eval failed: " << r.err);
        CHECK_TRUE(!metric(r.out, "success_rate").empty(), "eval prints success_rate");
        CHECK_TRUE(fs::exists(work / "report.txt"), "report written");
        const std::string report = slurp(work / "report.txt");
        CHECK_TRUE(report.find("success_rate=") != std::string::npos,
                   "report is metric=value formatted");

        // Frozen-centroid assignment consumes the saved centroids.
        r = run(cli,
                "cluster --codes " + (work / "codes.csv").string() + " --assign-to " +
                    (work / "centroids.csv").string() + " --out " +
                    (work / "assign2.csv").string(),
                work);
        CHECK_TRUE(r.exit_code == 0, "assign-to failed: " << r.err);
        CHECK_TRUE(metric(r.out, "mode") == "assign", "assign mode reported");

        // A converged Forgy run's assignments are a fixed point: assigning
        // to the saved centroids reproduces them (modulo source ids).
        std::istringstream a1(slurp(work / "assign.csv"));
        std::istringstream a2(slurp(work / "assign2.csv"));
        std::string l1, l2;
        bool same = true;
        while (std::getline(a1, l1) && std::getline(a2, l2)) {
            const std::string c1 = l1.substr(l1.rfind(',') + 1);
            const std::string c2 = l2.substr(l2.rfind(',') + 1);
            same = same && (c1 == c2);
        }
        CHECK_TRUE(same, "frozen-centroid assignment matches the converged run");

        // Reconstruction images for the first few inputs.
        r = run(cli,
                "reconstruct --model " + (work / "model.txt").string() + " --manifest " +
                    train_manifest + " --out " + (work / "recon").string() +
                    " --mirror-threshold 0.3",
                work);
        CHECK_TRUE(r.exit_code == 0, "reconstruct failed: " << r.err);
        CHECK_TRUE(fs::exists(work / "recon" / "disk_000_recon.pgm"),
                   "reconstructed PGM written");
        CHECK_TRUE(!metric(r.out, "mean_rms").empty(), "reconstruct prints mean_rms");
    }

    // --- identical seeds give byte-identical models ------------------------
    {
        const std::string train_manifest = (work / "corpus/train_manifest.txt").string();
        const std::string common =
            "train --manifest " + train_manifest +
            " --shape 676,12,6,676 --seed 99 --lr 0.02 --max-epochs 8"
            " --log-every 0 --out ";
        RunResult r1 = run(cli, common + (work / "m_a.txt").string(), work);
        RunResult r2 = run(cli, common + (work / "m_b.txt").string(), work);
        CHECK_TRUE(r1.exit_code == 0 && r2.exit_code == 0, "deterministic trains run");
        CHECK_TRUE(slurp(work / "m_a.txt") == slurp(work / "m_b.txt"),
                   "same seed gives byte-identical model files");
        CHECK_TRUE(!slurp(work / "m_a.txt").empty(), "model file non-empty");
    }

    // --- eval reproduces the published three-pattern arithmetic ------------
    {
        // 264 samples shaped like the three-pattern training tallies:
        // group 1: 88 furniture; group 2: 84 flower + 1 face;
        // group 3: 87 face + 4 flower -> 259/264.
        std::ofstream manifest(work / "paper_manifest.txt");
        std::ofstream assignments(work / "paper_assign.csv");
        int index = 0;
        auto emit = [&](int cluster, const std::string& cls, int count) {
            for (int i = 0; i < count; ++i) {
                const std::string name = "img_" + std::to_string(index++) + ".pgm";
                manifest << name << "," << cls << "\n";
                assignments << name << "," << cluster << "\n";
            }
        };
        emit(0, "furniture", 88);
        emit(1, "flower", 84);
        emit(1, "face", 1);
        emit(2, "face", 87);
        emit(2, "flower", 4);
        manifest.close();
        assignments.close();

        RunResult r = run(cli,
                          "eval --assignments " + (work / "paper_assign.csv").string() +
                              " --manifest " + (work / "paper_manifest.txt").string(),
                          work);
        CHECK_TRUE(r.exit_code == 0, "paper-shaped eval failed: " << r.err);
        const std::string rate = metric(r.out, "success_rate");
        CHECK_TRUE(!rate.empty(), "success_rate printed");
        const double got = std::strtod(rate.c_str(), nullptr);
        CHECK_TRUE(std::abs(got - 259.0 / 264.0) < 1e-9,
                   "three-pattern success rate is 259/264, got " << got);
        CHECK_TRUE(metric(r.out, "n_correct") == "259", "n_correct is 259");
    }

    // --- module errors surface as exit 1 with a one-line diagnostic --------
    {
        std::ofstream codes(work / "flat.csv");
        for (int i = 0; i < 6; ++i) codes << "1.0,2.0\n";
        codes.close();
        RunResult r = run(cli,
                          "cluster --codes " + (work / "flat.csv").string() +
                              " --k 2 --min-seed-distance 0.5 --out " +
                              (work / "flat_assign.csv").string(),
                          work);
        CHECK_TRUE(r.exit_code == 1, "identical codes cannot seed k=2");
        CHECK_TRUE(r.err.rfind("error: ", 0) == 0, "diagnostic starts with 'error: '");
        CHECK_TRUE(std::count(r.err.begin(), r.err.end(), '\n') == 1,
                   "diagnostic is a single line");
        CHECK_TRUE(!fs::exists(work / "flat_assign.csv"),
                   "no partial output on failure");

        r = run(cli, "train --manifest " + (work / "no_such.txt").string() + " --out " +
                         (work / "x.txt").string(),
                work);
        CHECK_TRUE(r.exit_code == 1, "missing manifest exits 1");
    }

    if (failures == 0) {
        std::cout << "cli_pipeline: all checks passed" << std::endl;
        return 0;
    }
    std::cerr << "cli_pipeline: " << failures << " check(s) failed" << std::endl;
    return 1;
}
