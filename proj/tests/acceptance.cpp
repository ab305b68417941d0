// Runs the ten acceptance criteria at full bounds and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "steenweb/suites.hpp"

using namespace steenweb;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string brief(const json& j)
{
    std::ostringstream os;
    os << j["suite"].get<std::string>() << " checked=" << j["checked"] << " failures=" << j["failures"];
    return os.str();
}

Outcome all_pass(const std::vector<json>& runs)
{
    Outcome o{true, ""};
    for (const auto& j : runs) {
        o.pass = o.pass && j["pass"].get<bool>();
        if (!o.detail.empty())
            o.detail += "; ";
        o.detail += brief(j);
        if (!j["pass"].get<bool>())
            o.detail += " first=" + j["first_counterexample"].dump();
    }
    return o;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism()
{
    const std::string cli = STEENWEB_CLI;
    const auto dir = std::filesystem::temp_directory_path() / "steenweb_acceptance";
    std::filesystem::create_directories(dir);
    const std::vector<std::string> suites = {
        "adem-oracle --p 2 --dmax 12",
        "adem-oracle --p 3 --dmax 24",
        "hit-lemma --p 5 --kmax 200",
        "sq-decomposition --lmax 128 --pow-max 16",
        "power-of-two --count 100 --seed 4",
        "odd-p --p 3 --count 100 --seed 4",
        "odd-p --p 5 --count 100 --seed 4",
        "gcd",
        "bodd",
        "web-exhaustive --n 6 --r 3",
        "web-random --count 30 --seed 12",
    };
    Outcome o{true, ""};
    int idx = 0;
    for (const auto& s : suites) {
        std::string out[2];
        for (int run = 0; run < 2; ++run) {
            const auto path = (dir / ("run" + std::to_string(idx) + "_" + std::to_string(run) + ".json")).string();
            const std::string cmd = "\"" + cli + "\" verify " + s + " > \"" + path + "\"";
            const int rc = std::system(cmd.c_str());
            if (rc != 0) {
                o.pass = false;
                o.detail += "[" + s + ": exit " + std::to_string(rc) + "] ";
            }
            out[run] = slurp(path);
        }
        if (out[0].empty() || out[0] != out[1]) {
            o.pass = false;
            o.detail += "[" + s + ": outputs differ] ";
        }
        ++idx;
    }
    if (o.pass)
        o.detail = std::to_string(suites.size()) + " suites byte-identical across two runs";
    return o;
}

} // namespace

int main()
{
    const auto corpus = suites::load_corpus(STEENWEB_DATA_DIR);
    const std::uint64_t seed = 20240601;

    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
        double limit_s; // 0: no runtime requirement
    };
    const std::vector<Criterion> criteria = {
        {"adem-oracle-equivalence",
         [] { return all_pass({suites::adem_oracle(2, 20, 4, 3), suites::adem_oracle(3, 40, 3, 8)}); }, 300},
        {"hit-decomposition", [] { return all_pass({suites::hit_lemma(3, 200), suites::hit_lemma(5, 200)}); }, 0},
        {"sq-decomposition", [] { return all_pass({suites::sq_decomposition(256, 32)}); }, 0},
        {"power-of-two-periodicity",
         [&] { return all_pass({suites::steenrod_periodicity(2, corpus, 500, seed)}); }, 0},
        {"odd-p-periodicity",
         [&] {
             return all_pass({suites::steenrod_periodicity(3, corpus, 500, seed),
                              suites::steenrod_periodicity(5, corpus, 500, seed)});
         },
         0},
        {"gcd-closure", [&] { return all_pass({suites::gcd_closure(corpus)}); }, 0},
        {"bodd-corollary", [&] { return all_pass({suites::bodd(corpus)}); }, 0},
        {"web-exhaustive-soundness",
         [] {
             const auto j = suites::web_exhaustive(8, 4, 1);
             auto o = all_pass({j});
             o.detail += " models=" + j["models"].dump() + " pairs=" + j["pairs"].dump() +
                         " certified=" + j["certified"].dump() + " flagged=" + j["flagged"].dump();
             return o;
         },
         600},
        {"web-randomized-coverage",
         [&] {
             const auto j = suites::web_random(1000, seed);
             auto o = all_pass({j});
             o.pass = o.pass && j["accounted"].get<bool>();
             o.detail += " certified=" + j["certified"].dump() + " flagged=" + j["flagged"].dump() +
                         " flagged_rate=" + j["flagged_rate"].dump() + " case5_traces=" + j["case5_traces"].dump();
             return o;
         },
         0},
        {"determinism", [] { return determinism(); }, 0},
    };

    int failed = 0;
    int index = 1;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit_s > 0 && secs > c.limit_s) {
            o.pass = false;
            o.detail += " (over the " + std::to_string(static_cast<int>(c.limit_s)) + "s budget)";
        }
        char head[96];
        std::snprintf(head, sizeof head, "%s %2d %-26s %8.1fs ", o.pass ? "PASS" : "FAIL", index, c.name, secs);
        std::cout << head << o.detail << std::endl;
        failed += !o.pass;
        ++index;
    }
    std::cout << (failed ? "FAILED " : "ALL PASS ") << (criteria.size() - failed) << "/" << criteria.size() << std::endl;
    return failed ? 1 : 0;
}
