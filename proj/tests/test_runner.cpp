#include "bqlab/runner.hpp"

#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace bq;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("bqlab_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool mentions(const std::vector<std::string>& diags, const std::string& needle)
{
    for (const auto& d : diags)
        if (d.find(needle) != std::string::npos) return true;
    return false;
}

int cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "bqlab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

} // namespace

TEST_CASE("experiment kinds")
{
    for (const auto& name : kind_names()) CHECK(to_string(parse_kind(name)) == name);
    CHECK(kind_names().size() == 5);
    CHECK_THROWS_AS(parse_kind("sweep"), std::invalid_argument);
}

TEST_CASE("config validation")
{
    ExperimentConfig c;
    CHECK(validate(c).empty());
    c.modes = 160;
    CHECK_FALSE(validate(c).empty());

    ExperimentConfig bil;
    bil.kind = ExperimentKind::BilinearSweep;
    CHECK(validate(bil).empty());
    bil.a = 0.6;
    CHECK(mentions(validate(bil), "a < 1/2 < b"));
    bil.a = 0.45;
    bil.ladder = {16, 32, 64};
    CHECK_FALSE(validate(bil).empty());

    ExperimentConfig ill;
    ill.kind = ExperimentKind::IllposedSweep;
    ill.s = -3;
    CHECK(validate(ill).empty());
    ill.ladder = {8, 16, 32, 64};
    CHECK(mentions(validate(ill), "minimum admissible N = 13"));

    ExperimentConfig est;
    est.kind = ExperimentKind::EstimateAudit;
    est.range_max = 150;
    CHECK(mentions(validate(est), "range-max"));
    est.range_max = 1e4;
    est.workers = 0;
    CHECK(mentions(validate(est), "workers"));

    ExperimentConfig bad;
    bad.modes = 161;
    bad.half_width = -1;
    CHECK_THROWS_AS(run(bad), std::invalid_argument);
}

TEST_CASE("CSV schema, quoting and number format")
{
    ReportRow r("demo", {{"name", "x\"y"}, {"N", 16}});
    r.value = 0.1;
    r.pass = false;
    ReportRow q("demo.slope", nlohmann::json::object());
    q.slope = 1.5;
    q.predicted_slope = -2.0;
    q.seconds = 0.25;
    const std::string csv = format_csv({r, q});
    std::istringstream in(csv);
    std::string header, l1, l2;
    std::getline(in, header);
    std::getline(in, l1);
    std::getline(in, l2);
    CHECK(header == "kind,param_json,value,slope,predicted_slope,pass,seconds");
    CHECK(l1 == "demo,\"{\"\"N\"\":16,\"\"name\"\":\"\"x\\\"\"y\"\"}\",0.10000000000000001,,,false,");
    CHECK(l2 == "demo.slope,\"{}\",,1.5,-2,true,0.25");
}

TEST_CASE("parallel_for is index-deterministic and rethrows the first failure")
{
    std::vector<double> a(100), b(100);
    parallel_for(100, 1, [&](int i) { a[i] = i * 0.5; });
    parallel_for(100, 4, [&](int i) { b[i] = i * 0.5; });
    CHECK(a == b);
    std::atomic<int> visited{0};
    try {
        parallel_for(50, 3, [&](int i) {
            ++visited;
            if (i == 7 || i == 30) throw std::runtime_error("index " + std::to_string(i));
        });
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "index 7");
    }
    CHECK(visited == 50);
    parallel_for(0, 4, [](int) { FAIL("no calls expected"); });
}

TEST_CASE("linear demo on zero data and report files")
{
    const auto dir = scratch("zero");
    ExperimentConfig c;
    c.kind = ExperimentKind::LinearDemo;
    c.data = "zero";
    c.modes = 65;
    c.samples = 5;
    c.plots = true;
    c.out_dir = dir.string();
    const RunResult res = run(c);
    CHECK(res.all_pass);
    for (const auto& row : res.rows) {
        if (row.kind == "linear-demo") CHECK(*row.value == 0.0);
        CHECK_FALSE(row.seconds.has_value());
    }
    CHECK(fs::exists(dir / "linear-demo.csv"));
    CHECK(fs::exists(dir / "linear-demo.svg"));
    CHECK(slurp(dir / "linear-demo.csv") == format_csv(res.rows));
}

TEST_CASE("command line: exit codes and option precedence")
{
    const auto base = scratch("cli");
    const auto cfg = base / "demo.toml";
    {
        std::ofstream out(cfg);
        out << "data = \"zero\"\nmodes = 33\nsamples = 3\nout = \"" << (base / "from_config").string() << "\"\n";
    }
    const auto env_dir = (base / "from_env").string();
    setenv("BQLAB_OUT_DIR", env_dir.c_str(), 1);

    CHECK(cli({"linear-demo", "--data", "zero", "--modes", "33", "--samples", "3"}) == 0);
    CHECK(fs::exists(base / "from_env" / "linear-demo.csv"));

    CHECK(cli({"linear-demo", "--config", cfg.string()}) == 0);
    CHECK(fs::exists(base / "from_config" / "linear-demo.csv"));

    CHECK(cli({"linear-demo", "--config", cfg.string(), "--out", (base / "from_cli").string()}) == 0);
    CHECK(fs::exists(base / "from_cli" / "linear-demo.csv"));
    unsetenv("BQLAB_OUT_DIR");

    const auto bogus = base / "bogus.toml";
    std::ofstream(bogus) << "bogus = 1\n";
    CHECK(cli({"linear-demo", "--config", bogus.string(), "--out", base.string()}) == 2);
    CHECK(cli({"no-such-kind"}) == 2);
    CHECK(cli({"linear-demo", "--modes", "32", "--out", base.string()}) == 2);
    CHECK(cli({"solve", "--max-iterations", "2", "--reference-steps", "0", "--out", base.string()}) == 2);
    CHECK(cli({"solve", "--amplitude", "5", "--T", "1", "--reference-steps", "0", "--out", base.string()}) == 1);
}
