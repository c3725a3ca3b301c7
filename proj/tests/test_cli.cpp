#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qnr/cli.hpp"

namespace qnr::cli {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = main_entry(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

TEST(Parse, ExceptionalExample) {
  const std::vector<std::string> args{"exceptional", "--q", "100000", "--u", "0", "--h", "20"};
  const auto c = parse_args(args);
  EXPECT_EQ(c.subcommand, Subcommand::exceptional);
  EXPECT_EQ(c.integer("q"), 100'000u);
  EXPECT_EQ(c.integer("u"), 0u);
  EXPECT_EQ(c.integer_list("h"), std::vector<u64>{20});
  EXPECT_EQ(c.format, OutputFormat::csv);
  EXPECT_EQ(c.workers, 1);
  EXPECT_TRUE(c.zero_as_residue);
}

TEST(Parse, DupExample) {
  const std::vector<std::string> args{"dup", "--p", "11", "--u", "2"};
  const auto c = parse_args(args);
  EXPECT_EQ(c.subcommand, Subcommand::dup);
  EXPECT_EQ(c.integer("p"), 11u);
  EXPECT_EQ(c.integer("u"), 2u);
}

TEST(Parse, SharedFlagsEitherSide) {
  const std::vector<std::string> a{"--format", "json", "nres", "--p", "7", "--workers", "3"};
  const auto c = parse_args(a);
  EXPECT_EQ(c.format, OutputFormat::json);
  EXPECT_EQ(c.workers, 3);
  const std::vector<std::string> b{"dp", "--p", "7", "--zero-as-residue", "false"};
  EXPECT_FALSE(parse_args(b).zero_as_residue);
}

TEST(Parse, UsageErrors) {
  auto throws = [](std::vector<std::string> args) {
    EXPECT_THROW(parse_args(args), UsageError) << args.front();
  };
  throws({"charsum", "--q", "225"});
  throws({"bogus"});
  throws({"nres", "--p", "7", "--bogus", "1"});
  throws({"nres", "--p", "9"});
  throws({"nres", "--p", "7", "--format", "xml"});
  throws({"nres", "--p", "7", "--seed", "3"});
  throws({"erdos", "--x", "ten"});
  throws({"exceptional", "--q", "5", "--h", "2"});
  throws({"trace", "--q", "100000", "--h", "50", "--eta", "0.1", "--format", "csv"});
  throws({"nres", "--p", "7", "--workers", "0"});
}

TEST(Parse, WorkersFromEnvironment) {
  ::setenv(std::string(kWorkersEnv).c_str(), "5", 1);
  const std::vector<std::string> args{"nres", "--p", "7"};
  EXPECT_EQ(parse_args(args).workers, 5);
  const std::vector<std::string> explicit_args{"nres", "--p", "7", "--workers", "2"};
  EXPECT_EQ(parse_args(explicit_args).workers, 2);
  ::unsetenv(std::string(kWorkersEnv).c_str());
  EXPECT_EQ(parse_args(args).workers, 1);
}

TEST(Run, DupRow) {
  const auto r = invoke({"dup", "--p", "11", "--u", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(data_lines(r.out), (std::vector<std::string>{"p,u,d_u", "11,2,4"}));
  EXPECT_NE(r.out.find("# tool: qnr 0.1.0\n"), std::string::npos);
  EXPECT_NE(r.out.find("# param: p=11\n"), std::string::npos);
  EXPECT_TRUE(r.err.empty());
}

TEST(Run, ErdosMean) {
  const auto r = invoke({"erdos", "--x", "10"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(data_lines(r.out)[0], "x,primes,mean,constant_partial");
  EXPECT_EQ(data_lines(r.out)[1].rfind("10,3,2.3333333333333335,", 0), 0u);
}

TEST(Run, Schemas) {
  auto header = [](std::vector<std::string> args) { return data_lines(invoke(args).out).at(0); };
  EXPECT_EQ(header({"nres", "--p", "7"}), "p,n_p");
  EXPECT_EQ(header({"dp", "--p", "7"}), "p,d_p,convention");
  EXPECT_EQ(header({"gaps", "--p", "11"}), "p,k,n_k,delta_k");
  EXPECT_EQ(header({"gaps", "--p", "11", "--h", "2"}), "p,h,N_h,S_h,c1,c2");
  EXPECT_EQ(header({"charsum", "--q", "15"}), "q,M,nu,sum,bound,ratio");
  EXPECT_EQ(header({"rough", "--eta", "0.5", "--M", "30"}), "eta,M,count,ratio_c0");
  EXPECT_EQ(header({"rough", "--eta", "0.5", "--M", "30", "--q", "7"}),
            "eta,M,q,plus,minus,zero,main_term");
  EXPECT_EQ(header({"sfree", "--u", "10", "--h", "5"}), "u,h,count,pair_count,ratio");
  EXPECT_EQ(header({"exceptional", "--q", "100", "--h", "2"}), "Q,u,h,exceptional,total,density");
  EXPECT_EQ(data_lines(invoke({"crt", "--pair", "3:1", "--pair", "5:2"}).out),
            (std::vector<std::string>{"u", "7"}));
}

TEST(Run, ExitCodesAndSilence) {
  const auto usage = invoke({"charsum", "--q", "225"});
  EXPECT_EQ(usage.code, 1);
  EXPECT_TRUE(usage.out.empty());
  EXPECT_NE(usage.err.find("q is a perfect square"), std::string::npos);

  const auto compute = invoke({"trace", "--q", "100000", "--u", "0", "--h", "1", "--eta", "0.1"});
  EXPECT_EQ(compute.code, 2);
  EXPECT_TRUE(compute.out.empty());
  EXPECT_FALSE(compute.err.empty());

  const auto help = invoke({"gaps", "--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("--quartic"), std::string::npos);
  EXPECT_NE(help.out.find("--workers"), std::string::npos);
}

TEST(Run, WorkersDoNotChangeBytes) {
  const std::vector<std::string> base{"exceptional", "--q", "20000", "--samples", "3", "--seed",
                                      "11", "--h", "2,4,6"};
  auto with = [&](const char* w) {
    auto args = base;
    args.insert(args.end(), {"--workers", w});
    return invoke(args);
  };
  const auto one = with("1");
  ASSERT_EQ(one.code, 0);
  for (const char* w : {"2", "4", "8"}) EXPECT_EQ(with(w).out, one.out) << w;

  const std::vector<std::string> nres{"nres", "--lo", "3", "--hi", "50000"};
  auto n1 = nres, n8 = nres;
  n8.insert(n8.end(), {"--workers", "8"});
  EXPECT_EQ(invoke(n1).out, invoke(n8).out);
}

TEST(Run, JsonDocuments) {
  const auto r = invoke({"erdos", "--x", "10", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["metadata"]["subcommand"], "erdos");
  EXPECT_EQ(doc["columns"].size(), 4u);
  EXPECT_EQ(doc["rows"][0]["primes"], 3);
  EXPECT_DOUBLE_EQ(doc["rows"][0]["mean"].get<double>(), 7.0 / 3.0);

  const auto t = invoke({"trace", "--q", "100000", "--u", "0", "--h", "50", "--eta", "0.1"});
  ASSERT_EQ(t.code, 0);
  const auto trace = nlohmann::json::parse(t.out);
  EXPECT_EQ(trace["result"]["regime"], "large-h");
  EXPECT_EQ(trace["result"]["N"]["size"], 11);
}

TEST(Run, OutFile) {
  const auto path = std::filesystem::temp_directory_path() / "qnr_cli_out.csv";
  std::filesystem::remove(path);
  const auto r = invoke({"nres", "--p", "23", "--out", path.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(data_lines(text.str()), (std::vector<std::string>{"p,n_p", "23,5"}));
  std::filesystem::remove(path);

  // failures leave no file behind
  const auto bad = invoke({"trace", "--q", "100000", "--u", "0", "--h", "1", "--eta", "0.1",
                           "--out", path.string()});
  EXPECT_EQ(bad.code, 2);
  EXPECT_FALSE(std::filesystem::exists(path));
}

TEST(Run, ZeroConventionRecorded) {
  const auto r = invoke({"dp", "--p", "7", "--zero-as-residue", "false"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("# convention: zero_as_residue=false"), std::string::npos);
  EXPECT_EQ(data_lines(r.out)[1].substr(0, 4), "7,2,");
  EXPECT_EQ(data_lines(invoke({"dp", "--p", "7"}).out)[1].substr(0, 4), "7,3,");
}

}  // namespace
}  // namespace qnr::cli
