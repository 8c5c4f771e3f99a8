#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "covario/cli.hpp"

using covario::run_cli;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::vector<std::string> data_rows(const std::string& text) {
    std::vector<std::string> rows;
    std::istringstream is(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        rows.push_back(line);
    }
    return rows;
}

std::string tmp_path(const std::string& name) {
    return std::string("/tmp/covario_test_") + name;
}

} // namespace

TEST_CASE("dn subcommand writes ten certified rows") {
    const std::string out = tmp_path("dn.csv");
    CHECK(run_cli({"dn", "--max", "10", "--out", out}) == 0);
    const std::string text = slurp(out);
    const auto rows = data_rows(text);
    REQUIRE(rows.size() == 10);
    CHECK(rows[0].rfind("1,1,", 0) == 0); // D_1 = 1 exactly
    CHECK(text.find("# covario") == 0);
    CHECK(text.find("seed=") != std::string::npos);
    std::remove(out.c_str());
}

TEST_CASE("catalan subcommand") {
    const std::string out = tmp_path("catalan.csv");
    CHECK(run_cli({"catalan", "--max", "5", "--out", out}) == 0);
    const auto rows = data_rows(slurp(out));
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == "1,1");
    CHECK(rows[1] == "2,2");
    CHECK(rows[2] == "3,5");
    CHECK(rows[3] == "4,14");
    CHECK(rows[4] == "5,42");
    std::remove(out.c_str());
}

TEST_CASE("lemma subcommands certify the range") {
    const std::string out = tmp_path("lemma.csv");
    CHECK(run_cli({"lemma41", "--max", "30", "--out", out}) == 0);
    CHECK(run_cli({"lemma42", "--max", "30", "--out", out}) == 0);
    std::remove(out.c_str());
}

TEST_CASE("theorem1 on the builtin simplex raises the equality flag") {
    const std::string out = tmp_path("thm_simplex.csv");
    CHECK(run_cli({"theorem1", "--body", "builtin:simplex", "--dim", "2", "--out",
                   out}) == 0);
    const auto rows = data_rows(slurp(out));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].find("true,true") != std::string::npos);
    std::remove(out.c_str());
}

TEST_CASE("theorem1 on the cube passes without equality") {
    const std::string out = tmp_path("thm_cube.csv");
    CHECK(run_cli({"theorem1", "--body", "builtin:cube", "--dim", "2", "--seed",
                   "7", "--out", out}) == 0);
    const auto rows = data_rows(slurp(out));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].find("true,false") != std::string::npos);
    std::remove(out.c_str());
}

TEST_CASE("identical configurations emit identical bytes") {
    const std::string a = tmp_path("det_a.csv");
    const std::string b = tmp_path("det_b.csv");
    const std::vector<std::string> args = {"covariogram", "--body", "builtin:simplex",
                                           "--dim", "2", "--seed", "9"};
    auto with_out = [&](const std::string& path) {
        std::vector<std::string> full = args;
        full.push_back("--out");
        full.push_back(path);
        return full;
    };
    CHECK(run_cli(with_out(a)) == 0);
    CHECK(run_cli(with_out(b)) == 0);
    CHECK(slurp(a) == slurp(b));
    std::remove(a.c_str());
    std::remove(b.c_str());
}

TEST_CASE("json format embeds the configuration") {
    const std::string out = tmp_path("dn.json");
    CHECK(run_cli({"dn", "--max", "3", "--format", "json", "--out", out}) == 0);
    const nlohmann::json doc = nlohmann::json::parse(slurp(out));
    CHECK(doc.at("tool") == "covario");
    CHECK(doc.at("config").at("seed") == 7);
    CHECK(doc.at("rows").size() == 3);
    std::remove(out.c_str());
}

TEST_CASE("gmono runs the suite") {
    const std::string out = tmp_path("gmono.csv");
    CHECK(run_cli({"gmono", "--trials", "50", "--alpha", "0.5", "--seed", "7",
                   "--out", out}) == 0);
    const auto rows = data_rows(slurp(out));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].find("true") != std::string::npos);
    std::remove(out.c_str());
}

TEST_CASE("inclusion subcommand on the triangle") {
    const std::string out = tmp_path("inc.csv");
    CHECK(run_cli({"inclusion", "--body", "builtin:simplex", "--dim", "2", "--p",
                   "1", "--q", "2", "--out", out}) == 0);
    const auto rows = data_rows(slurp(out));
    REQUIRE(rows.size() == 3);
    std::remove(out.c_str());
}

TEST_CASE("vpolytope body from a JSON file") {
    const std::string body_path = tmp_path("tri.json");
    {
        std::ofstream f(body_path);
        f << R"({"type":"vpolytope","dim":2,"vertices":[[0,0],[1,0],[0,1]]})";
    }
    const std::string out = tmp_path("thm_tri.csv");
    CHECK(run_cli({"theorem1", "--body", "vpolytope:" + body_path, "--samples",
                   "20000", "--dirs", "512", "--out", out}) == 0);
    const auto rows = data_rows(slurp(out));
    REQUIRE(rows.size() == 1);
    // A triangle is a simplex: equality within the MC tolerance.
    CHECK(rows[0].find("true,true") != std::string::npos);
    std::remove(body_path.c_str());
    std::remove(out.c_str());
}

TEST_CASE("ballbody subcommand emits a radial table plus volume notes") {
    const std::string out = tmp_path("ballbody.csv");
    CHECK(run_cli({"ballbody", "--body", "builtin:simplex", "--dim", "2", "--p",
                   "4", "--dirs", "16", "--out", out}) == 0);
    const std::string text = slurp(out);
    CHECK(data_rows(text).size() == 16);
    CHECK(text.find("# volume=1.549193") != std::string::npos); // 6/sqrt(15)
    std::remove(out.c_str());
}

TEST_CASE("reduce subcommand emits the symmetric artifact") {
    const std::string out = tmp_path("reduce.csv");
    CHECK(run_cli({"reduce", "--body", "builtin:cube", "--dim", "2", "--dirs",
                   "32", "--out", out}) == 0);
    const std::string text = slurp(out);
    CHECK(data_rows(text).size() == 32); // antipodal pairs of 16 directions
    CHECK(text.find("# constant=1.095445") != std::string::npos); // D_2
    CHECK(text.find("# symmetry_defect=") != std::string::npos);
    std::remove(out.c_str());
}

TEST_CASE("covariogram subcommand tolerates a non-simplex level-set row") {
    const std::string out = tmp_path("cov_cube.csv");
    CHECK(run_cli({"covariogram", "--body", "builtin:cube", "--dim", "2",
                   "--trials", "200", "--out", out}) == 0);
    const auto rows = data_rows(slurp(out));
    REQUIRE(rows.size() == 4);
    CHECK(rows[3].find("simplex_levelset") != std::string::npos);
    std::remove(out.c_str());
}

TEST_CASE("volbound subcommand") {
    const std::string out = tmp_path("volbound.csv");
    CHECK(run_cli({"volbound", "--body", "builtin:simplex", "--dim", "2", "--out",
                   out}) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("equality") != std::string::npos);
    std::remove(out.c_str());
}

TEST_CASE("configuration errors exit with code 2") {
    CHECK(run_cli({"theorem1", "--body", "builtin:egg", "--dim", "2"}) == 2);
    CHECK(run_cli({"theorem1", "--body", "/nonexistent/file.json"}) == 2);
    CHECK(run_cli({"dn", "--unknown-flag", "3"}) == 2);
    CHECK(run_cli({}) == 2);
    CHECK(run_cli({"volbound", "--body", "builtin:cube", "--dim", "2", "--format",
                   "yaml"}) == 2);
}
