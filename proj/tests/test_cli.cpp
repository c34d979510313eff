#include "commands.hpp"
#include "csv.hpp"
#include "manifest.hpp"

#include "svmreg/model.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace svmreg::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("svmreg_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << content;
    return p;
  }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }

  static std::string toy_csv() {
    std::ostringstream s;
    s << "y,a,b\n";
    const double xa[] = {0.1, 1.2, -0.7, 2.1, -1.5, 0.4, 1.9, -0.2, -2.2, 0.8, 1.1, -1.0};
    const double xb[] = {1.0, -0.3, 0.5, 0.9, -1.1, 0.2, -0.8, 1.4, 0.3, -0.6, 0.7, -0.4};
    const int y[] = {0, 1, 1, 1, 0, 0, 1, 0, 0, 1, 1, 0};
    for (int i = 0; i < 12; ++i) s << y[i] << "," << xa[i] << "," << xb[i] << "\n";
    return s.str();
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST(Csv, ParsesBothEncodings) {
  const CsvTable a = parse_csv("y,x\n1,0.5\n-1,2\n", CsvSchema{});
  EXPECT_EQ(a.schema.label_encoding, LabelEncoding::PlusMinusOne);
  EXPECT_EQ(a.positives, 1);
  const CsvTable b = parse_csv("\xEF\xBB\xBF\"x\",\"y\"\r\n0.5,0\r\n2,1\r\n", CsvSchema{});
  EXPECT_EQ(b.schema.label_encoding, LabelEncoding::ZeroOne);
  EXPECT_EQ(b.schema.feature_columns, std::vector<std::string>{"x"});
  EXPECT_EQ(b.data.label(0), Label::Negative);
  EXPECT_DOUBLE_EQ(b.data.x()(1, 0), 2.0);
}

TEST(Csv, ExplicitFeatureSelection) {
  CsvSchema s;
  s.label_column = "cls";
  s.feature_columns = {"c", "a"};
  const CsvTable t = parse_csv("a,b,cls,c\n1,2,1,3\n4,5,0,6\n", s);
  EXPECT_EQ(t.data.dim(), 2);
  EXPECT_DOUBLE_EQ(t.data.x()(0, 0), 3.0);
  EXPECT_DOUBLE_EQ(t.data.x()(1, 1), 4.0);
}

TEST(Csv, ErrorsCarryLineNumbers) {
  auto message = [](const std::string& text) {
    try {
      parse_csv(text, CsvSchema{});
    } catch (const DataError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_EQ(message("y,x\n1,2\n0,abc\n").rfind("line 3:", 0), 0u);
  EXPECT_EQ(message("y,x\n1,2\n\n0,1,5\n").rfind("line 4:", 0), 0u);
  EXPECT_EQ(message("y,x\n1,2\n2,1\n").rfind("line 3:", 0), 0u);
  EXPECT_EQ(message("y,x\n1,2\n0,1\n-1,3\n").rfind("line 4:", 0), 0u);
  EXPECT_EQ(message("y,x\n1,nan\n").rfind("line 2:", 0), 0u);
  EXPECT_EQ(message("z,x\n1,2\n").rfind("line 1:", 0), 0u);
  EXPECT_EQ(message("y,x,x\n1,2,3\n").rfind("line 1:", 0), 0u);
  EXPECT_EQ(message("").rfind("line 1:", 0), 0u);
  EXPECT_EQ(message("y,x\n").rfind("line 2:", 0), 0u);
  EXPECT_EQ(message("y,x\n1,\n").rfind("line 2:", 0), 0u);
}

TEST(Csv, ForcedEncodingMismatch) {
  CsvSchema s;
  s.label_encoding = LabelEncoding::PlusMinusOne;
  EXPECT_THROW(parse_csv("y,x\n1,2\n0,1\n", s), DataError);
}

TEST(Manifest, Sha256KnownAnswer) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}), kExitUsage);
  EXPECT_EQ(run({"frobnicate"}), kExitUsage);
  EXPECT_EQ(run({"fit"}), kExitUsage);
  const auto csv = write("toy.csv", toy_csv());
  EXPECT_EQ(run({"fit", csv.string(), "--model", "lasso"}), kExitUsage);
  EXPECT_EQ(run({"cv", csv.string(), "--k", "1"}), kExitUsage);
  EXPECT_EQ(run({"simulate", "--study", "bogus"}), kExitUsage);
  EXPECT_EQ(run({"simulate", "--study", "acc", "--omega-grid", "1.5", "--reps", "1"}), kExitUsage);
  EXPECT_EQ(run({"--help"}), kExitOk);
}

TEST_F(CliTest, DataErrors) {
  EXPECT_EQ(run({"fit", (dir_ / "missing.csv").string()}), kExitData);
  const auto bad = write("bad.csv", "y,x\n1,2\n0,oops\n");
  EXPECT_EQ(run({"fit", bad.string()}), kExitData);
  EXPECT_NE(err_.str().find("line 3"), std::string::npos);
}

TEST_F(CliTest, FitThenPredictReproducesAccuracy) {
  const auto csv = write("toy.csv", toy_csv());
  for (const std::string model : {"svmreg", "logistic", "svm", "approx"}) {
    const auto report = dir_ / ("fit_" + model + ".json");
    ASSERT_EQ(run({"fit", csv.string(), "--model", model, "--out", report.string()}), kExitOk) << err_.str();
    const json j = json::parse(std::ifstream(report));
    const auto preds = dir_ / ("pred_" + model + ".csv");
    ASSERT_EQ(run({"predict", "--model", report.string(), csv.string(), "--out", preds.string()}), kExitOk)
        << err_.str();
    std::ostringstream expected;
    expected << "accuracy: " << std::setprecision(6) << j["in_sample_accuracy"].get<double>() << "\n";
    EXPECT_EQ(out_.str(), expected.str()) << model;

    std::ifstream in(preds);
    std::string header;
    std::getline(in, header);
    const bool probabilistic = model == "svmreg" || model == "logistic";
    EXPECT_EQ(header, probabilistic ? "row,label,probability" : "row,label");
    std::string line;
    while (std::getline(in, line)) {
      std::stringstream ls(line);
      std::string row, label, prob;
      std::getline(ls, row, ',');
      std::getline(ls, label, ',');
      EXPECT_TRUE(label == "0" || label == "1");
      if (probabilistic) {
        std::getline(ls, prob, ',');
        const double p = std::stod(prob);
        EXPECT_GT(p, 0.0);
        EXPECT_LT(p, 1.0);
        EXPECT_EQ(label == "1", p >= 0.5);
      }
    }
  }
}

TEST_F(CliTest, PredictZeroMarginRow) {
  const auto train = write("train.csv", "y,x\n1,1\n-1,-1\n1,2\n-1,-2\n1,-0.5\n-1,0.5\n");
  const auto report = dir_ / "fit.json";
  ASSERT_EQ(run({"fit", train.string(), "--out", report.string()}), kExitOk);
  json j = json::parse(std::ifstream(report));
  j["theta"]["alpha"] = 0.0;
  j["theta"]["beta"] = {3.0};
  std::ofstream(report) << j.dump();
  const auto test = write("test.csv", "x\n0\n");
  ASSERT_EQ(run({"predict", "--model", report.string(), test.string()}), kExitOk) << err_.str();
  EXPECT_EQ(out_.str(), "row,label,probability\n1,1,0.5\n");
}

TEST_F(CliTest, PredictRejectsMissingFeature) {
  const auto csv = write("toy.csv", toy_csv());
  const auto report = dir_ / "fit.json";
  ASSERT_EQ(run({"fit", csv.string(), "--out", report.string()}), kExitOk);
  const auto test = write("test.csv", "a,c\n1,2\n");
  EXPECT_EQ(run({"predict", "--model", report.string(), test.string()}), kExitData);
}

TEST_F(CliTest, FitReportContents) {
  const auto csv = write("toy.csv", toy_csv());
  ASSERT_EQ(run({"fit", csv.string(), "--seed", "4"}), kExitOk) << err_.str();
  const json j = json::parse(out_.str());
  EXPECT_EQ(j["model"], "svmreg");
  EXPECT_EQ(j["manifest"]["command"], "fit");
  EXPECT_EQ(j["manifest"]["seed"], 4);
  EXPECT_EQ(j["manifest"]["input_digest"], "sha256:" + sha256_hex(toy_csv()));
  EXPECT_EQ(j["schema"]["feature_columns"], json({"a", "b"}));
  EXPECT_EQ(j["schema"]["label_encoding"], "01");
  ASSERT_EQ(j["coefficients"].size(), 3u);
  EXPECT_EQ(j["coefficients"][0]["name"], "(Intercept)");
  EXPECT_TRUE(j["coefficients"][1].contains("se"));
  EXPECT_NEAR(j["loglik_total"].get<double>(), 12.0 * j["loglik_mean"].get<double>(), 1e-9);
  EXPECT_TRUE(j["existence"]["full_rank"].get<bool>());
}

TEST_F(CliTest, PolynomialFeatures) {
  const auto csv = write("toy.csv", toy_csv());
  const auto report = dir_ / "fit.json";
  ASSERT_EQ(run({"fit", csv.string(), "--poly-u", "2", "--poly-c", "1", "--out", report.string()}), kExitOk)
      << err_.str();
  const json j = json::parse(std::ifstream(report));
  EXPECT_EQ(j["features"]["names"], json({"a", "b", "a^2", "a*b", "b^2"}));
  EXPECT_EQ(j["theta"]["beta"].size(), 5u);
  ASSERT_EQ(run({"predict", "--model", report.string(), csv.string(), "--out", (dir_ / "p.csv").string()}),
            kExitOk);
}

TEST_F(CliTest, SingleClassWarns) {
  const auto csv = write("one.csv", "y,x\n1,0.5\n1,1.5\n1,-0.3\n");
  ASSERT_EQ(run({"fit", csv.string()}), kExitOk) << err_.str();
  const json j = json::parse(out_.str());
  EXPECT_FALSE(j["existence"]["both_labels_present"].get<bool>());
  EXPECT_FALSE(j["fit"]["converged"].get<bool>());
  EXPECT_FALSE(j["warnings"].empty());
}

TEST_F(CliTest, CheckCommand) {
  const auto csv = write("dup.csv", "y,x1,x2\n1,1,2\n-1,1,2\n1,3,1\n-1,0,5\n");
  ASSERT_EQ(run({"check", csv.string()}), kExitOk);
  const json j = json::parse(out_.str());
  EXPECT_TRUE(j["existence"]["remark2_pair_found"].get<bool>());
  EXPECT_EQ(j["existence"]["augmented_rank"], 3);
}

TEST_F(CliTest, DeterministicModuloTimestamp) {
  const auto csv = write("toy.csv", toy_csv());
  const std::vector<std::vector<std::string>> commands = {
      {"fit", csv.string(), "--seed", "9"},
      {"fit", csv.string(), "--model", "logistic"},
      {"cv", csv.string(), "--k", "3", "--seed", "2", "--methods", "svmreg,svm,logistic"},
      {"check", csv.string()},
      {"simulate", "--study", "mse", "--reps", "1", "--n-grid", "100", "--d-grid", "1", "--seed", "3"},
      {"simulate", "--study", "acc", "--reps", "2", "--n-grid", "100", "--d-grid", "2", "--test-size", "200"},
  };
  for (const auto& cmd : commands) {
    ASSERT_EQ(run(cmd), kExitOk) << err_.str();
    json a = json::parse(out_.str());
    ASSERT_EQ(run(cmd), kExitOk);
    json b = json::parse(out_.str());
    a["manifest"].erase("timestamp");
    b["manifest"].erase("timestamp");
    EXPECT_EQ(a.dump(), b.dump()) << cmd[0];
  }
}

TEST_F(CliTest, CvSharedPartition) {
  const auto csv = write("toy.csv", toy_csv());
  ASSERT_EQ(run({"cv", csv.string(), "--k", "2", "--seed", "1"}), kExitOk);
  const json j = json::parse(out_.str());
  EXPECT_EQ(j["fold_of"].size(), 12u);
  EXPECT_TRUE(j["methods"].contains("svmreg"));
  EXPECT_TRUE(j["methods"].contains("svm"));
  EXPECT_EQ(j["methods"]["svmreg"]["fold_accuracy"].size(), 2u);
}

TEST_F(CliTest, SimulateConfigFileAndOverrides) {
  const auto cfg = write("cfg.json", R"({"study": "mse", "n_grid": [100], "d_grid": [1, 2], "reps": 1})");
  ASSERT_EQ(run({"simulate", "--config", cfg.string(), "--d-grid", "1"}), kExitOk) << err_.str();
  const json j = json::parse(out_.str());
  EXPECT_EQ(j["cells"].size(), 1u);
  EXPECT_EQ(j["manifest"]["config"]["d_grid"], json({1}));
  const auto out = dir_ / "sim.json";
  ASSERT_EQ(run({"simulate", "--config", cfg.string(), "--out", out.string()}), kExitOk);
  EXPECT_NE(out_.str().find("n \\ d"), std::string::npos);
  EXPECT_TRUE(fs::exists(out));
}

}  // namespace
}  // namespace svmreg::cli
