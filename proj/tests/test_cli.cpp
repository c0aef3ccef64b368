#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hawkes/cli.hpp"

using namespace hawkes;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kData = HAWKES_TEST_DATA;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "hawkes-cli");
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_command(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("hawkes_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("mphi table for a constant kernel") {
    const fs::path dir = scratch("mphi");
    const auto r = run({"mphi", "-c", kData + "/constant_mphi.toml", "--out", dir.string()});
    REQUIRE(r.code == kExitOk);
    const json j = json::parse(slurp(dir / "report.json"));
    const auto& rows = j.at("mphi");
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].at("value").get<double>() == doctest::Approx(1.0));
    CHECK(rows[1].at("value").get<double>() == doctest::Approx(0.25));
    CHECK(rows[2].at("value").get<double>() == doctest::Approx(0.0416667).epsilon(1e-6));
    const std::string csv = slurp(dir / "mphi.csv");
    CHECK(csv.rfind("n,value,stderr,method,upper_bound\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("price on a Poisson config has no surplus") {
    const auto r = run({"price", "--config", kData + "/poisson.toml"});
    REQUIRE(r.code == kExitOk);
    const json j = json::parse(r.out);
    CHECK(j.at("command") == "price");
    CHECK(j.at("surplus_part").get<double>() == 0.0);
    const double series = j.at("premium_series").at("total").get<double>();
    const double oracle = j.at("oracle").at("mean").get<double>();
    const double sigma = std::hypot(j.at("premium_series").at("total_stderr").get<double>(),
                                    j.at("oracle").at("stderr").get<double>());
    CHECK(std::abs(series - oracle) <= 3.0 * sigma);
}

TEST_CASE("schema errors exit with code 2") {
    const auto r = run({"price", "-c", kData + "/missing_kernel.toml"});
    CHECK(r.code == kExitSchema);
    CHECK(r.err.find("kernel") != std::string::npos);
    CHECK(run({"bounds", "-c", kData + "/constant_mphi.toml"}).code == kExitSchema);  // no contract block
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"launch"}).code == kExitUsage);
    CHECK(run({"price"}).code == kExitUsage);
    CHECK(run({"price", "-c", kData + "/poisson.toml", "--threads", "many"}).code == kExitUsage);
    CHECK(run({"--help"}).code == kExitOk);
    CHECK(run({"price", "-c", kData + "/nope.toml"}).code == kExitFailure);
}

TEST_CASE("simulate writes a path CSV") {
    const fs::path dir = scratch("simulate");
    const auto r = run({"simulate", "-c", kData + "/exponential.toml", "--out", dir.string(), "--seed", "5"});
    REQUIRE(r.code == kExitOk);
    const std::string csv = slurp(dir / "paths.csv");
    CHECK(csv.rfind("path_id,time,tag,intensity_left_limit\n", 0) == 0);
    const json j = json::parse(slurp(dir / "report.json"));
    CHECK(j.at("seed") == 5);
    REQUIRE(j.at("paths").size() == 3);
    std::size_t events = 0;
    for (const auto& p : j.at("paths")) events += p.at("count").get<std::size_t>();
    CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == events + 1);
}

TEST_CASE("bounds report carries the comparison fields") {
    const auto r = run({"bounds", "-c", kData + "/exponential.toml"});
    REQUIRE(r.code == kExitOk);
    const json j = json::parse(r.out);
    for (const char* key : {"lower_simple", "lower_poisson", "upper", "premium_series", "oracle", "poisson_part",
                            "surplus_part", "config_echo"})
        CHECK_MESSAGE(j.contains(key), key);
    CHECK(j.at("lower_simple").at("value").get<double>() <= j.at("lower_poisson").at("value").get<double>());
}

TEST_CASE("validate is reproducible and independent of the thread count") {
    const auto a = run({"validate", "-c", kData + "/exponential.toml", "--threads", "1"});
    const auto b = run({"validate", "-c", kData + "/exponential.toml", "--threads", "4"});
    const auto c = run({"validate", "-c", kData + "/exponential.toml", "--threads", "4"});
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
    CHECK(b.out == c.out);
    const json j = json::parse(a.out);
    CHECK(j.at("violations") == 0);
    CHECK(j.at("sigma") == 4.0);
}

TEST_CASE("validate exits 3 on a violation") {
    // sigma so small that the Monte Carlo comparisons cannot all hold
    const fs::path cfg = scratch("strict.json");
    json doc = json::parse(slurp(kData + "/exponential.json"));
    doc["numerics"]["validate_sigma"] = 1e-9;
    std::ofstream(cfg) << doc.dump();
    const auto r = run({"validate", "-c", cfg.string()});
    CHECK(r.code == kExitViolation);
    CHECK(json::parse(r.out).at("violations").get<int>() > 0);
}
