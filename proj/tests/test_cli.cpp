#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <json.hpp>

using json = nlohmann::json;

namespace {

struct CliRun {
    int rc;
    std::string out;
};

CliRun run(const std::string& args, const std::string& env = "") {
    const char* exe = std::getenv("QWCLI");
    std::string cmd = env + " " + std::string(exe ? exe : "./qwcli") + " " + args + " 2>/dev/null";
    CliRun r{-1, ""};
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int st = pclose(p);
    r.rc = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

}  // namespace

TEST(Cli, VerifyHeisenberg) {
    CliRun r = run("verify --suite heisenberg --r 1 --max-size 3 --mode probe --seed 7");
    ASSERT_EQ(r.rc, 0);
    json j = json::parse(r.out);
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_EQ(j["config"]["seed"], 7);
    EXPECT_EQ(j["config_hash"].get<std::string>().size(), 16u);
}

TEST(Cli, VacuumMatrixElement) {
    CliRun r = run("wmatrix --r 1 --d 0 --k 1 --size-from 0 --size-to 1");
    ASSERT_EQ(r.rc, 0);
    json j = json::parse(r.out);
    bool found = false;
    for (auto& e : j["result"])
        if (e["mu"] == json::parse("[[]]") && e["lambda"] == json::parse("[[]]")) {
            EXPECT_EQ(e["value"], "u1");
            found = true;
        }
    EXPECT_TRUE(found);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run("verify --suite no-such").rc, 2);
    EXPECT_EQ(run("").rc, 2);
    EXPECT_EQ(run("verify --suite heisenberg --r 0").rc, 2);
    EXPECT_EQ(run("ext --lambda '[[1' --lambda-prime '[[]]'").rc, 2);
    EXPECT_EQ(run("ext --lambda '[[1,2]]' --lambda-prime '[[]]'").rc, 2);
    EXPECT_EQ(run("nekrasov --specialize zz=1").rc, 2);
    EXPECT_EQ(run("classical --suite limit --mode exact").rc, 2);
}

TEST(Cli, Deterministic) {
    std::string a = "verify --suite rel123 --r 2 --max-size 2 --seed 5";
    CliRun x = run(a), y = run(a);
    EXPECT_EQ(x.rc, 0);
    EXPECT_EQ(x.out, y.out);
    CliRun z = run("verify --suite rel123 --r 2 --max-size 2 --seed 6");
    EXPECT_NE(json::parse(x.out)["config_hash"], json::parse(z.out)["config_hash"]);
    // the thread request is not part of the hashed config
    CliRun t = run("--json-indent -1 verify --suite rel123 --r 2 --max-size 2 --seed 5", "QW_THREADS=4");
    json jt = json::parse(t.out);
    EXPECT_EQ(jt["config_hash"], json::parse(x.out)["config_hash"]);
    EXPECT_EQ(jt["threads_requested"], "4");
}

TEST(Cli, FailureCarriesWitnessAndExitsOne) {
    CliRun r = run("classical --suite locality --form literal --r 2 --max-size 1 --i 1");
    EXPECT_EQ(r.rc, 1);
    json j = json::parse(r.out);
    EXPECT_FALSE(j["pass"].get<bool>());
    EXPECT_FALSE(j["suites"][0]["failures"].empty());
}

TEST(Cli, NekrasovAndSpecialization) {
    CliRun r = run("nekrasov --r 1 --quiver-length 1 --max-instanton 1");
    ASSERT_EQ(r.rc, 0);
    json j = json::parse(r.out);
    EXPECT_EQ(j["result"]["0"], "1");
    // q1 = q2 = 1 would be a pole; a generic point is fine
    CliRun s = run("nekrasov --r 1 --quiver-length 1 --max-instanton 1 --specialize q1=2 --specialize q2=3 "
                "--specialize u1=5 --specialize m=7");
    ASSERT_EQ(s.rc, 0);
    std::string v = json::parse(s.out)["result"]["1"];
    EXPECT_EQ(v.find('q'), std::string::npos);
    EXPECT_EQ(v.find('u'), std::string::npos);
}

TEST(Cli, ExtCoefficient) {
    CliRun r = run("ext --lambda '[[1]]' --lambda-prime '[[]]'");
    ASSERT_EQ(r.rc, 0);
    EXPECT_EQ(json::parse(r.out)["result"]["a_matrix"], "-u1*up1^-1*m + 1");
    EXPECT_EQ(run("ext --lambda '[[]]' --lambda-prime '[[]]'").rc, 0);
}

TEST(Cli, OtherSubcommands) {
    EXPECT_EQ(run("shuffle --family E --k 2 --d 0").rc, 0);
    CliRun e = run("ext --suite thm43 --r 1 --max-size 2");
    EXPECT_EQ(e.rc, 0);
    EXPECT_EQ(json::parse(e.out)["config"]["mode"], "probe");
    EXPECT_EQ(run("shuffle --suite hq --a 1 --b 1 --order 2").rc, 0);
    EXPECT_EQ(run("miura --r 2 --suite mish --max-degree 2").rc, 0);
    EXPECT_EQ(run("classical --suite limit --r 1 --max-size 2").rc, 0);
    EXPECT_EQ(run("classical --suite locality --r 1 --max-size 2").rc, 0);
}
