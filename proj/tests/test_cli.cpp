#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace {

struct RunResult {
    int rc = -1;
    std::string out;
};

RunResult run(const std::string& args, bool keep_stderr = false) {
    std::string cmd = std::string(ORBIT_PRESSURE_BIN) + " " + args +
                      (keep_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    RunResult r;
    char buf[4096];
    size_t k;
    while ((k = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, k);
    int status = pclose(p);
    r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

// data rows: skip '#' config echo and the header line
std::vector<std::vector<std::string>> data_rows(const std::string& out) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(out);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("schema_version,", 0) == 0) continue;
        rows.push_back(split_csv_line(line));
    }
    return rows;
}

constexpr int kValue = 12;
constexpr int kStatus = 16;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kHeader =
    "schema_version,command,system,potential,measure,kind,q,n,eps,M,seed,method,value,"
    "covered_mass,centers,walltime_ms,status";

}  // namespace

TEST_CASE("dist reproduces the doubling separation example") {
    RunResult r = run("dist --system doubling --x 0 --y 0.001 --n 3 --metric bowen");
    CHECK(r.rc == 0);
    CHECK(r.out.find(kHeader) != std::string::npos);
    auto rows = data_rows(r.out);
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].size() == 17);
    CHECK(std::fabs(std::stod(rows[0][kValue]) - 0.004) < 1e-6);
    CHECK(rows[0][kStatus] == "ok");
}

TEST_CASE("identical invocations produce identical bytes") {
    std::string args =
        "pressure --system sft --transitions 11,10 --n 4,8 --eps 0.25 --metric bowen,fk "
        "--potential first_symbol:0.1,-0.2";
    RunResult a = run(args), b = run(args);
    CHECK(a.rc == 0);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
}

TEST_CASE("x-equals-y gives zero distance in every family") {
    RunResult r =
        run("dist --system rotation --seed 9 --x-equals-y --n 6 --metric bowen,mean,maxmean,fk");
    CHECK(r.rc == 0);
    auto rows = data_rows(r.out);
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) CHECK(std::stod(row[kValue]) == 0.0);
}

TEST_CASE("config files feed the same grammar and flags override them") {
    {
        std::ofstream f("tmp_cli_config.cfg");
        f << "# comment line\n";
        f << "system = fullshift2\n";
        f << "n = 4\n";
        f << "eps = 0.25\n";
    }
    RunResult file_only = run("entropy --config tmp_cli_config.cfg");
    CHECK(file_only.rc == 0);
    auto rows = data_rows(file_only.out);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0][7] == "4");

    RunResult overridden = run("entropy --config tmp_cli_config.cfg --n 6");
    CHECK(overridden.rc == 0);
    auto rows2 = data_rows(overridden.out);
    REQUIRE(rows2.size() == 1);
    CHECK(rows2[0][7] == "6");
    std::remove("tmp_cli_config.cfg");
}

TEST_CASE("config mistakes exit 2 before any work happens") {
    CHECK(run("entropy --system fullshift2 --eps 0.25").rc == 2);        // missing n
    CHECK(run("entropy --system fullshift2 --n 4").rc == 2);             // missing eps
    CHECK(run("dist --system doubling --n 3").rc == 2);                  // no points, no seed
    CHECK(run("pressure --system fullshift2 --n 4 --eps 0.25 --q 1 --qmax 2").rc == 2);
    CHECK(run("table --system fullshift2 --n 4 --eps 0.25").rc == 2);    // table needs out
    CHECK(run("entropy --system fullshift2 --n 4 --eps 0.25 --variant measure").rc == 2);
    CHECK(run("dist --system doubling --x 0 --y zzz --n 3").rc == 2);
    CHECK(run("frobnicate --n 3").rc == 2);                              // unknown command

    {
        std::ofstream f("tmp_cli_bad.cfg");
        f << "system = fullshift2\nn = 4\neps = 0.25\nbogus_key = 1\n";
    }
    RunResult bad = run("entropy --config tmp_cli_bad.cfg", true);
    CHECK(bad.rc == 2);
    CHECK(bad.out.find("bogus_key") != std::string::npos);
    std::remove("tmp_cli_bad.cfg");
}

TEST_CASE("per-cell failures are rows, not process failures") {
    RunResult r = run("entropy --system fullshift2 --n 4,300 --eps 0.0625");
    CHECK(r.rc == 0);
    auto rows = data_rows(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][kStatus] == "ok");
    CHECK(rows[1][kStatus] == "HORIZON_EXHAUSTED");
    CHECK(rows[1][kValue].empty());
}

TEST_CASE("json output carries the same run") {
    RunResult r = run("dist --system doubling --x 0 --y 0.001 --n 3 --format json");
    CHECK(r.rc == 0);
    CHECK(r.out.rfind("{", 0) == 0);
    CHECK(r.out.find("\"schema_version\": 1") != std::string::npos);
    CHECK(r.out.find("\"command\": \"dist\"") != std::string::npos);
    CHECK(r.out.find("\"rows\": [") != std::string::npos);
}

TEST_CASE("table writes files atomically and reruns are byte-identical") {
    std::string args =
        "table --system sft --transitions 11,10 --n 8,16 --eps 0.0625 --metric bowen "
        "--out tmp_cli_table.csv";
    RunResult a = run(args);
    CHECK(a.rc == 0);
    std::string first = slurp("tmp_cli_table.csv");
    CHECK_FALSE(first.empty());
    CHECK(first.find("extrapolated") != std::string::npos);
    CHECK(first.find("oracle") != std::string::npos);
    CHECK(first.find("0.481211825059") != std::string::npos);  // golden-mean entropy

    RunResult b = run(args);
    CHECK(b.rc == 0);
    CHECK(slurp("tmp_cli_table.csv") == first);
    std::remove("tmp_cli_table.csv");

    // unwritable target: config error, no partial file
    CHECK(run("table --system fullshift2 --n 4 --eps 0.25 --out no_such_dir/x.csv").rc == 2);
}

TEST_CASE("verify reports pass and fault injection flips the exit code") {
    RunResult ok = run("verify --pairs 15 --n-max 6");
    CHECK(ok.rc == 0);
    CHECK(ok.out.find("[PASS] chain") != std::string::npos);
    CHECK(ok.out.find("[PASS] cover") != std::string::npos);

    RunResult bad = run("verify --suite fk-oracle --pairs 15 --inject-fault loose-match");
    CHECK(bad.rc == 1);
    CHECK(bad.out.find("[FAIL] fk-oracle") != std::string::npos);

    RunResult drop = run("verify --suite birkhoff --pairs 15 --inject-fault drop-term");
    CHECK(drop.rc == 1);
    CHECK(drop.out.find("[FAIL] birkhoff") != std::string::npos);
}

TEST_CASE("brin-katok rows carry the order statistics in the method column") {
    RunResult r = run(
        "brin-katok --system fullshift2 --measure bernoulli:0.5,0.5 --M 2000 --seed 4 "
        "--centers 8 --n 6 --radius 0.125");
    CHECK(r.rc == 0);
    auto rows = data_rows(r.out);
    REQUIRE(rows.size() >= 3);
    CHECK(rows[0][11] == "median");
    CHECK(rows[1][11] == "q25");
    CHECK(rows[2][11] == "q75");
    double median = std::stod(rows[0][kValue]);
    CHECK(median > 0.5);  // near (9/6) log 2 for this radius
    CHECK(median < 1.5);
}

TEST_CASE("inf-over-q emits per-q rows plus the argmin row") {
    RunResult r = run(
        "pressure --system rotation --variant measure --measure lebesgue --M 400 --seed 2 "
        "--n 8 --eps 0.25 --qmax 3");
    CHECK(r.rc == 0);
    auto rows = data_rows(r.out);
    REQUIRE(rows.size() == 4);
    for (int q = 1; q <= 3; ++q) {
        CHECK(rows[q - 1][1] == "pressure");
        CHECK(rows[q - 1][6] == std::to_string(q));
    }
    CHECK(rows[3][1] == "inf-q");
    double inf = std::stod(rows[3][kValue]);
    for (int q = 0; q < 3; ++q) CHECK(inf <= std::stod(rows[q][kValue]));
}
