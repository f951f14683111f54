#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dclab/catalog.hpp"
#include "dclab/errors.hpp"

using namespace dclab;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "dclab_catalog_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

RunParameters small(RunParameters p) {
  p.targets = std::min<std::size_t>(p.targets, 40);
  p.ball_pairs = 10;
  return p;
}

}  // namespace

TEST(Catalog, Names) {
  const auto names = catalog_names();
  EXPECT_EQ(names.size(), 6u);
  EXPECT_NE(std::find(names.begin(), names.end(), "flagship_shift"), names.end());
  EXPECT_THROW(builtin_instance("no_such_instance"), PreconditionViolation);
}

TEST(Catalog, FlagshipWeights) {
  const Instance f = builtin_instance("flagship_shift");
  const IndexLattice z = IndexLattice::integers();
  EXPECT_EQ(apply(f.op, SupportVector::basis(z, 0)), SupportVector::basis(z, 1, 3));
  EXPECT_EQ(apply(f.op, SupportVector::basis(z, -1)), SupportVector::basis(z, 0, 4));
  ASSERT_TRUE(f.criterion.has_value());
  EXPECT_EQ(f.criterion->nk, (AffineSchedule{2, 0}));
}

TEST(Catalog, RoundTripEveryBuiltin) {
  for (const auto& name : catalog_names()) {
    const Instance inst = builtin_instance(name);
    EXPECT_EQ(instance_from_json(instance_to_json(inst)), inst) << name;
    const auto path = scratch(name + ".json");
    write_json_atomic(instance_to_json(inst), path);
    EXPECT_EQ(load_instance(path), inst) << name;
    EXPECT_EQ(resolve_instance(path.string()), inst) << name;
  }
}

TEST(Catalog, ZeroWeightCannotBeInvertible) {
  Json j = instance_to_json(builtin_instance("flagship_shift"));
  j["op"]["weights"]["nonneg"] = "0";
  try {
    instance_from_json(j);
    FAIL();
  } catch (const InvariantViolation& e) {
    EXPECT_NE(e.field().find("/op"), std::string::npos);
  }
}

TEST(Catalog, FixtureAlphaOutsideDisk) {
  Json j = instance_to_json(builtin_instance("scalar_diskcyclic"));
  j["fixtures"] = Json::array({{{"target", vector_to_json(SupportVector::basis(IndexLattice::finite(2), 0))},
                                {"n", 1},
                                {"alpha", {{"re", "1"}, {"im", "1"}}}}});
  try {
    instance_from_json(j);
    FAIL();
  } catch (const InvariantViolation& e) {
    EXPECT_EQ(e.field(), "/fixtures/0/alpha");
  }
}

TEST(Catalog, ParseErrorHasLocation) {
  const auto path = scratch("broken.json");
  write_text(path, "{\n  \"name\": \"x\",\n  \"op\": {,\n}\n");
  try {
    load_instance(path);
    FAIL();
  } catch (const ParseError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("line 3"), std::string::npos) << what;
    EXPECT_NE(what.find("broken.json"), std::string::npos) << what;
  }
}

TEST(Catalog, FiniteDimensionalFamily) {
  for (std::int64_t n = 1; n <= 8; ++n) {
    const Instance inst = generate_finite_dim_instance(n);
    EXPECT_EQ(inst.name, "fd_" + std::to_string(n));
    EXPECT_EQ(instance_from_json(instance_to_json(inst)), inst);
    const RunReport r = run_report(inst, {"coverage"}, small(inst.parameters));
    EXPECT_TRUE(r.ok()) << n;
    EXPECT_TRUE(r.verdicts.at("coverage")) << n;
  }
  EXPECT_EQ(generate_finite_dim_instance(1).flags, std::vector<std::string>{"trivial_subspace"});
  EXPECT_THROW(generate_finite_dim_instance(0), PreconditionViolation);
}

TEST(Catalog, BuiltinsMatchExpectations) {
  for (const auto& name : catalog_names()) {
    if (name == "flagship_shift") continue;  // covered by the acceptance suite
    const Instance inst = builtin_instance(name);
    const RunReport r = run_report(inst, {}, small(inst.parameters));
    EXPECT_TRUE(r.ok()) << name << ": " << r.document["mismatches"].dump();
  }
}

TEST(Catalog, ReportsAreByteIdentical) {
  const Instance inst = builtin_instance("scalar_diskcyclic");
  const auto a = scratch("a.json"), b = scratch("b.json");
  RunParameters p = small(inst.parameters);
  write_report(run_report(inst, {}, p), a);
  p.threads = 3;
  RunReport threaded = run_report(inst, {}, p);
  threaded.document["parameters"]["threads"] = 1;  // the echo is the only allowed difference
  write_report(threaded, b);
  EXPECT_EQ(read_text(a), read_text(b));
}

TEST(Catalog, CsvExport) {
  const Instance inst = builtin_instance("inverse_halving");
  const RunReport r = run_report(inst, {"coverage"}, small(inst.parameters));
  const std::string csv = export_csv(r.document);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "index,hit,n,alpha_re,alpha_im,residual");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, small(inst.parameters).targets);
  EXPECT_FALSE(export_csv(r.document, "coverage@2").empty());
  EXPECT_THROW(export_csv(r.document, "criterion"), Error);
}

TEST(Catalog, Parameters) {
  RunParameters p;
  p.tol = Rational(1, 1000);
  p.window = {-3, 4};
  EXPECT_EQ(parameters_from_json(parameters_to_json(p), "/p"), p);
}
