// SPDX-License-Identifier: Apache-2.0
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <memory>

#include "doctest.h"
#include "json.hpp"
#include "nclaplace/errors.hpp"
#include "nclaplace/report.hpp"
#include "support.hpp"

using namespace nclap;

namespace {

SpectrumReport small_report() {
  auto s = std::make_shared<const SurfaceDescriptor>(SurfaceDescriptor::spheroid(1, 2));
  const auto ops = QuantizedOperatorSet::assemble(s, QuantizationGrid::build(10, -1, 1, default_beta(*s)));
  SpectrumOptions o;
  o.count = 8;
  return spectrum(*ops, o);
}

std::string temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "nclaplace_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_SUITE("report") {
  TEST_CASE("number formatting") {
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(-2.000012087392884) == "-2.00001208739288");
    CHECK(format_number(1e-300) == "1e-300");
  }

  TEST_CASE("spectrum JSON carries the resolved configuration and round-trips") {
    const auto r = small_report();
    const auto j = nlohmann::json::parse(spectrum_json(r));
    CHECK(j["surface"] == "spheroid");
    CHECK(j["N"] == 10);
    CHECK(j["strategy"] == "blocks");
    CHECK(j["eigenvalues"].size() == 8);
    CHECK(j["config"]["beta"].get<double>() == doctest::Approx(default_beta(SurfaceDescriptor::spheroid(1, 2))));
    CHECK(j["config"]["epsilon"].get<double>() == 1e-12);
    CHECK(j["config"]["grid_offset"] == "paper");
    for (const auto& e : j["eigenvalues"]) {
      CHECK(e.contains("residual"));
      CHECK(e.contains("block"));
      CHECK(e.contains("cluster"));
    }
    const auto back = spectrum_from_json(spectrum_json(r));
    REQUIRE(back.eigenpairs.size() == r.eigenpairs.size());
    for (std::size_t i = 0; i < r.eigenpairs.size(); ++i) CHECK(back.eigenpairs[i].value == r.eigenpairs[i].value);
    CHECK(back.beta == r.beta);
    CHECK(spectrum_json(back) == spectrum_json(r));
  }

  TEST_CASE("CSV output is deterministic") {
    const std::string a = spectrum_csv(small_report());
    const std::string b = spectrum_csv(small_report());
    CHECK(a == b);
    CHECK(a.rfind("# surface=spheroid", 0) == 0);
    CHECK(a.find("index,value,imag,residual,block,cluster,converged,imaginary_flag\n") != std::string::npos);
  }

  TEST_CASE("binary matrix layout") {
    testing_support::Rng rng(41);
    const CMatrix M = testing_support::random_matrix(rng, 5);
    const std::string path = temp_path("m.bin");
    write_matrix_binary(path, M);
    const std::string raw = read_text(path);
    REQUIRE(raw.size() == 32 + 25 * 16);
    CHECK(raw.substr(0, 4) == "NCLQ");
    std::uint32_t version;
    std::uint64_t n;
    std::memcpy(&version, raw.data() + 4, 4);
    std::memcpy(&n, raw.data() + 8, 8);
    CHECK(version == 1);
    CHECK(n == 5);
    double re, im;
    std::memcpy(&re, raw.data() + 32 + 16 * 7, 8);  // row 1, column 2
    std::memcpy(&im, raw.data() + 32 + 16 * 7 + 8, 8);
    CHECK(re == M(1, 2).real());
    CHECK(im == M(1, 2).imag());
    CHECK(read_matrix_binary(path) == M);

    write_text(path, "NOPE");
    CHECK_THROWS_AS(read_matrix_binary(path), IoError);
  }

  TEST_CASE("JSON matrices") {
    testing_support::Rng rng(42);
    const CMatrix M = testing_support::random_matrix(rng, 4);
    const auto j = nlohmann::json::parse(matrix_json(M));
    CHECK(j.size() == 4);
    CHECK(j[2][3][1].get<double>() == M(2, 3).imag());
    CHECK(matrix_from_json(matrix_json(M)) == M);
  }

  TEST_CASE("convergence and axiom tables") {
    const auto s = std::make_shared<const SurfaceDescriptor>(SurfaceDescriptor::unit_sphere());
    SpectrumOptions o;
    o.count = 4;
    const auto t = convergence_study(s, {20, 40}, 1.0, GridOffset::paper, o, {{0.0, 1}, {-2.0, 3}});
    const std::string csv = convergence_csv(t);
    CHECK(csv.find("N,hbar,cluster,lambda,reference,abs_error,fitted_order\n") != std::string::npos);
    const auto plots = convergence_plot_data(t);
    REQUIRE(plots.count(1) == 1);
    CHECK(plots.at(1).rfind("# cluster 1", 0) == 0);

    const auto a = axiom_table(SurfaceDescriptor::unit_sphere(), {20, 40}, std::nullopt, GridOffset::paper);
    const std::string acsv = axioms_csv(a);
    CHECK(acsv.find("N,pair,product_defect,bracket_defect,norm_bound\n") != std::string::npos);
    CHECK(acsv.find("20,trace,") != std::string::npos);
    CHECK(acsv.find("40,\"z,z\",0,0,") != std::string::npos);
  }
}
