#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "ruinlab/gaussian.hpp"

namespace {

using ruinlab::cli::RunRecord;

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = ruinlab::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

RunRecord first_record(const std::string& out) {
    std::istringstream is(out);
    std::string line;
    std::string last;
    while (std::getline(is, line))
        if (!line.empty() && line.front() == '{') last = line;
    return ruinlab::cli::parse_record(last);
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

std::filesystem::path temp_file(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("ruinlab_cli_" + name);
    std::filesystem::remove(p);
    return p;
}

TEST(CliExitCodes, MissingReserveIsUsageError) {
    EXPECT_EQ(invoke({"estimate", "--delta", "0"}).code, 2);
    EXPECT_EQ(invoke({"formulas"}).code, 2);
    EXPECT_EQ(invoke({"ruin-time"}).code, 2);
}

TEST(CliExitCodes, InvalidValuesAreUsageErrors) {
    EXPECT_EQ(invoke({"estimate", "--u", "1", "--paths", "0"}).code, 2);
    EXPECT_EQ(invoke({"estimate", "--u", "1", "--T", "-1"}).code, 2);
    EXPECT_EQ(invoke({"estimate", "--u", "1", "--sigma", "0"}).code, 2);
    EXPECT_EQ(invoke({"estimate", "--u", "1", "--mode", "sideways"}).code, 2);
    EXPECT_EQ(invoke({"study", "--us", ""}).code, 2);
    EXPECT_EQ(invoke({"study", "--us", "1,0.5", "--paths", "10"}).code, 2);
    EXPECT_EQ(invoke({"study", "--us", "1", "--T", "1"}).code, 2);
    EXPECT_EQ(invoke({"piterbarg", "--lambdas", "5,2,10", "--paths", "10"}).code, 2);
    EXPECT_EQ(invoke({"piterbarg", "--lambdas", "2,5", "--paths", "10"}).code, 2);
    EXPECT_EQ(invoke({"nonsense"}).code, 2);
    EXPECT_EQ(invoke({}).code, 2);
}

TEST(CliExitCodes, HelpIsSuccess) {
    const auto r = invoke({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("estimate"), std::string::npos);
}

TEST(CliFormulas, ZeroReserveIsCertainRuin) {
    const auto r = invoke({"formulas", "--u", "0", "--delta", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rec = first_record(r.out);
    EXPECT_EQ(rec.command, "formulas");
    EXPECT_EQ(rec.result.at("psi_S_exact").get<double>(), 1.0);
    EXPECT_TRUE(rec.result.at("parisian_asymptotic").is_null());
}

TEST(CliFormulas, InfiniteHorizonWithInterest) {
    const auto r = invoke({"formulas", "--u", "1", "--delta", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rec = first_record(r.out);
    const double expected = ruinlab::normal_tail(2.0 * std::sqrt(2.0)) / ruinlab::normal_tail(std::sqrt(2.0));
    EXPECT_NEAR(rec.result.at("psi_inf").get<double>(), expected, 1e-14);
    EXPECT_NEAR(rec.result.at("psi_inf").get<double>(), 0.02974, 1e-5);
}

TEST(CliRecords, DeterministicApartFromWallTime) {
    const std::vector<std::string> args{"estimate", "--u", "1", "--paths", "300", "--base-step", "0.01",
                                        "--fine-step", "0.01", "--seed", "7"};
    const auto a = first_record(invoke(args).out);
    auto b = first_record(invoke(args).out);
    b.wall_time = a.wall_time;
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.seed, 7u);
}

TEST(CliRecords, ThreadCountDoesNotChangeRecord) {
    std::vector<std::string> args{"estimate", "--u", "0.5", "--paths", "500", "--base-step", "0.01",
                                  "--fine-step", "0.01", "--mode", "classical"};
    auto one = args;
    one.insert(one.end(), {"--threads", "1"});
    auto many = args;
    many.insert(many.end(), {"--threads", "4"});
    const auto a = first_record(invoke(one).out);
    auto b = first_record(invoke(many).out);
    b.wall_time = a.wall_time;
    EXPECT_EQ(a, b);
}

TEST(CliRecords, SerializationRoundTrips) {
    const auto r = invoke({"formulas", "--u", "1.5", "--delta", "0.3", "--T", "0.2", "--piterbarg", "1.3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rec = first_record(r.out);
    EXPECT_EQ(ruinlab::cli::parse_record(ruinlab::cli::serialize(rec)), rec);
    EXPECT_EQ(rec.tool_version, ruinlab::cli::kToolVersion);
}

TEST(CliRecords, OutFileAppendsOneLinePerRun) {
    const auto path = temp_file("records.jsonl");
    for (int i = 0; i < 2; ++i)
        ASSERT_EQ(invoke({"formulas", "--u", "1", "--out", path.string()}).code, 0);
    std::ifstream is(path);
    std::string line;
    int lines = 0;
    while (std::getline(is, line)) {
        EXPECT_EQ(ruinlab::cli::parse_record(line).command, "formulas");
        ++lines;
    }
    EXPECT_EQ(lines, 2);
    std::filesystem::remove(path);
}

TEST(CliConfig, FileSuppliesValuesAndFlagsWin) {
    const auto path = temp_file("config.toml");
    {
        std::ofstream os(path);
        os << "u = 2.0\ndelta = 1.0\nc = 3.0\n";
    }
    const auto r = invoke({"--config", path.string(), "formulas", "--c", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rec = first_record(r.out);
    EXPECT_EQ(rec.params.at("u").get<double>(), 2.0);
    EXPECT_EQ(rec.params.at("delta").get<double>(), 1.0);
    EXPECT_EQ(rec.params.at("c").get<double>(), 1.0);
    std::filesystem::remove(path);
}

TEST(CliStudy, CsvMatchesRecordAndAsymptotic) {
    const auto path = temp_file("study.csv");
    const auto r = invoke({"study", "--us", "0.5,1", "--paths", "400", "--base-step", "0.01", "--fine-step",
                           "0.01", "--csv", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rec = first_record(r.out);
    std::ifstream is(path);
    std::stringstream ss;
    ss << is.rdbuf();
    const auto rows = read_csv(ss.str());
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"u", "mc", "se", "asymptotic", "ratio"}));
    const auto& table = rec.result.at("rows");
    for (std::size_t i = 0; i < 2; ++i) {
        ASSERT_EQ(rows[i + 1].size(), 5u);
        const double u = std::strtod(rows[i + 1][0].c_str(), nullptr);
        EXPECT_EQ(u, table[i].at("u").get<double>());
        EXPECT_EQ(std::strtod(rows[i + 1][1].c_str(), nullptr), table[i].at("mc").get<double>());
        EXPECT_EQ(std::strtod(rows[i + 1][2].c_str(), nullptr), table[i].at("se").get<double>());
        const double asym = std::strtod(rows[i + 1][3].c_str(), nullptr);
        EXPECT_EQ(asym, table[i].at("asymptotic").get<double>());
        EXPECT_NEAR(asym, 2.0 * ruinlab::normal_tail(u + 1.0), 1e-15);
        EXPECT_EQ(std::strtod(rows[i + 1][4].c_str(), nullptr), table[i].at("ratio").get<double>());
    }
    std::filesystem::remove(path);
}

TEST(CliStudy, AbsentRatioIsEmptyField) {
    ruinlab::StudyRow row;
    row.u = 3.0;
    row.asymptotic = 0.0;
    std::ostringstream os;
    ruinlab::cli::write_study_csv(os, std::span<const ruinlab::StudyRow>(&row, 1));
    const auto rows = read_csv(os.str());
    ASSERT_EQ(rows.size(), 2u);
    ASSERT_EQ(rows[1].size(), 5u);
    EXPECT_TRUE(rows[1][4].empty());
}

TEST(CliRuinTime, TailCsvRoundTrips) {
    const auto r = invoke({"ruin-time", "--u", "0.5", "--paths", "500", "--base-step", "0.01", "--fine-step",
                           "0.01", "--xs", "0,1", "--csv", "-"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rec = first_record(r.out);
    const auto rows = read_csv(r.out.substr(0, r.out.find('{')));
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"x", "empirical_tail", "theory_tail"}));
    EXPECT_EQ(std::strtod(rows[1][1].c_str(), nullptr), 1.0);
    const auto& table = rec.result.at("rows");
    EXPECT_EQ(std::strtod(rows[2][1].c_str(), nullptr), table[1].at("empirical_tail").get<double>());
    EXPECT_EQ(std::strtod(rows[2][2].c_str(), nullptr), std::exp(-0.5));
}

}  // namespace
