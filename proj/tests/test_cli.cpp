#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "duffmel/cli.hpp"

using namespace duffmel;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "duffmel");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "duffmel_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string write(const std::string& name, const std::string& text) {
    const fs::path p = scratch(name);
    std::ofstream(p) << text;
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool contains(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("coefficient tables") {
        const std::string one = write("one.json", R"({"lambda1": [0,1,0,0,0,0,0,0,0,0]})");
        const Run r = run({"coeffs", "--params", one, "--annulus", "interior-right"});
        CHECK(r.code == 0);
        CHECK(contains(r.out, "M1  poly0 [1]"));
        CHECK(contains(r.out, "M2 not reported"));

        const std::string empty = write("empty.json", "{}");
        const Run z = run({"coeffs", "--params", empty});
        CHECK(z.code == 0);
        CHECK(contains(z.out, "annulus interior-right"));
        CHECK(contains(z.out, "annulus exterior"));
        CHECK(contains(z.out, "M2  poly0 [0]  poly1 [0]  poly2 [0]"));

        const Run c = run({"coeffs", "--random", "constrained", "--seed", "42", "--annulus", "exterior"});
        CHECK(c.code == 0);
        CHECK(contains(c.out, "M2 oracle"));
        CHECK(contains(c.out, "deviates; corrected form governs"));
        CHECK_FALSE(contains(c.out, "MISMATCH"));
    }

    TEST_CASE("verify") {
        const Run r = run({"verify"});
        CHECK(contains(r.out, "[interior-right]"));
        CHECK(contains(r.out, "[exterior]"));
        CHECK(contains(r.out, "PASS  picard-fuchs I0 relation [exterior]"));
        CHECK(contains(r.out, "PASS  wronskian jump factor 2"));
        // the plain log-log slope misses the 1e-3 tolerance; nothing else fails
        CHECK(r.code == 3);
        CHECK(contains(r.out, "failed: \"exterior I0 log-log slope on [1e2, 1e6]\"\n"));

        const Run f = run({"verify", "--annulus", "exterior", "--fault-inject", "pf"});
        CHECK(f.code == 3);
        CHECK(contains(f.out, "FAIL  picard-fuchs I0 relation [exterior]"));
        CHECK(contains(f.out, "\"picard-fuchs I0 relation [exterior]\""));
        CHECK_FALSE(contains(f.out, "[interior-right]"));
    }

    TEST_CASE("zero certificates") {
        const fs::path out = scratch("zeros.jsonl");
        const Run r = run({"zeros", "--random", "constrained", "--order", "2", "--annulus", "interior-right",
                           "--draws", "20", "--seed", "5", "--out", out.string()});
        CHECK(r.code == 0);
        CHECK(contains(r.out, "interior-right"));
        const std::string text = slurp(out);
        int lines = 0;
        for (char ch : text) lines += ch == '\n';
        // config, one certificate per draw, summary
        CHECK(lines == 22);
        CHECK(contains(text, "\"winding_count\""));
        CHECK(contains(text, "{\"summary\":"));

        const std::string bad = write("bad.json", R"({"gamma1": [0,0,0,0,0,0,0,0,0,1]})");
        const Run b = run({"zeros", "--params", bad, "--order", "2"});
        CHECK(b.code == 2);
        CHECK(contains(b.err, "M1 does not vanish"));
        CHECK(run({"zeros", "--random", "free", "--contour", "10,-1,0.001"}).code == 2);
        CHECK(run({"zeros", "--random", "free", "--contour", "10,0.001"}).code == 2);
    }

    TEST_CASE("oracle rows") {
        const std::string one = write("one.json", R"({"lambda1": [0,1,0,0,0,0,0,0,0,0]})");
        const Run r = run({"oracle", "--params", one, "--annulus", "exterior", "--h", "1"});
        CHECK(r.code == 0);
        CHECK(contains(r.out, "sigma"));
        CHECK_FALSE(contains(r.out, "MISMATCH"));
    }

    TEST_CASE("point evaluation") {
        const Run r = run({"eval", "--what", "I0", "--annulus", "exterior", "--h", "1", "--im", "2"});
        CHECK(r.code == 0);
        CHECK(contains(r.out, "h = 1+2i"));
        const Run n = run({"eval", "--what", "I0", "--annulus", "exterior", "--h", "0"});
        CHECK(n.code == 4);
        CHECK(contains(n.err, "numerical failure"));
        CHECK(run({"eval", "--what", "I9x", "--annulus", "exterior", "--h", "1"}).code == 2);
    }

    TEST_CASE("usage errors") {
        CHECK(run({}).code == 2);
        CHECK(run({"frobnicate"}).code == 2);
        CHECK(run({"coeffs", "--annulus", "middle"}).code == 2);
        CHECK(run({"coeffs", "--params", "/nonexistent.json"}).code == 2);
        const std::string one = write("one.json", R"({"lambda1": [0,1,0,0,0,0,0,0,0,0]})");
        const Run both = run({"coeffs", "--params", one, "--random", "free"});
        CHECK(both.code == 2);
        CHECK(contains(both.err, "mutually exclusive"));
        const std::string broken = write("broken.json", "{\"lambda1\": [1]}");
        CHECK(run({"coeffs", "--params", broken}).code == 2);
        CHECK(run({"--help"}).code == 0);
    }

    TEST_CASE("determinism") {
        for (const std::vector<std::string>& args :
             {std::vector<std::string>{"zeros", "--random", "free", "--order", "1", "--draws", "10", "--seed", "3"},
              std::vector<std::string>{"coeffs", "--random", "constrained", "--seed", "8"}}) {
            const fs::path p = scratch("repeat.jsonl");
            std::vector<std::string> with_out = args;
            with_out.insert(with_out.end(), {"--out", p.string()});
            const Run first = run(with_out);
            const std::string a = slurp(p);
            const Run second = run(with_out);
            CHECK(slurp(p) == a);
            CHECK(first.out == second.out);
            CHECK_FALSE(a.empty());
        }
    }
}
