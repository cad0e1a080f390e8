#include <cmath>
#include <fstream>
#include <random>
#include <vector>

#include "chess/error.hpp"
#include "chess/fft.hpp"
#include "chess/field_io.hpp"
#include "chess/grid.hpp"
#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"

using namespace chess;
using doctest::Approx;
using oracle::kPi;

namespace {

Field random_field(const TorusGrid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Field f(g);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = gauss(rng);
  return f;
}

double max_diff(const Field& a, const Field& b) { return (a - b).sup_norm(); }

}  // namespace

TEST_CASE("TorusGrid validates its shape") {
  CHECK_THROWS_AS(TorusGrid(2, 6), ParameterError);
  CHECK_THROWS_AS(TorusGrid(2, 2), ParameterError);
  CHECK_THROWS_AS(TorusGrid(0, 8), ParameterError);
  const TorusGrid g(2, 8);
  CHECK(g.size() == 4096);
  CHECK(g.dims() == 4);
  std::vector<double> x(4);
  g.coords(1, x);
  CHECK(x[3] == Approx(1.0 / 8.0));
  CHECK(x[0] == 0.0);
  g.coords(8, x);
  CHECK(x[2] == Approx(1.0 / 8.0));
  std::vector<int> m(4);
  g.wavenumbers(4, m);
  CHECK(m[3] == 4);
  g.wavenumbers(5, m);
  CHECK(m[3] == -3);
}

TEST_CASE("Field rejects non-finite samples") {
  const TorusGrid g(1, 4);
  std::vector<double> d(16, 0.0);
  d[3] = NAN;
  CHECK_THROWS_AS(Field(g, d), ValidationError);
  CHECK_THROWS_AS(Field(g, std::vector<double>(15)), ValidationError);
}

TEST_CASE("fft_nd matches the direct DFT") {
  for (std::size_t dims : {1u, 2u, 4u}) {
    const std::size_t N = dims == 4 ? 4 : 8;
    std::size_t total = 1;
    for (std::size_t a = 0; a < dims; ++a) total *= N;
    std::mt19937_64 rng(dims);
    std::normal_distribution<double> gauss;
    std::vector<cplx> data(total);
    for (auto& v : data) v = {gauss(rng), gauss(rng)};
    for (bool inverse : {false, true}) {
      auto fast = data;
      fft_nd(fast, dims, N, inverse, Exec::serial);
      const auto slow = oracle::dft_nd(data, dims, N, inverse);
      double err = 0.0, mag = 0.0;
      for (std::size_t i = 0; i < total; ++i) {
        err = std::max(err, std::abs(fast[i] - slow[i]));
        mag = std::max(mag, std::abs(slow[i]));
      }
      CHECK(err <= 1e-12 * mag);
    }
  }
}

TEST_CASE("fft_roundtrip examples") {
  const TorusGrid g(2, 8);
  const Field c(g, 3.25);
  CHECK(max_diff(fft_roundtrip(c), c) <= 1e-15 * 3.25 * 4);

  const Field cosx = oracle::sample(g, [](const std::vector<double>& x) { return std::cos(2 * kPi * x[0]); });
  CHECK(max_diff(fft_roundtrip(cosx), cosx) <= 1e-13);

  const Field r = random_field(g, 1);
  CHECK(max_diff(fft_roundtrip(r), r) <= 1e-12 * r.sup_norm());
}

TEST_CASE("complex_hessian of a single mode") {
  const TorusGrid g(2, 16);
  const double a = 0.3;
  const Field phi = oracle::sample(g, [&](const std::vector<double>& x) { return a * std::cos(2 * kPi * x[0]); });
  const HermField h = complex_hessian(phi);
  double err = 0.0;
  std::vector<double> x(4);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.coords(i, x);
    err = std::max(err, std::abs(h.entry(i, 0, 0) - cplx(-a * kPi * kPi * std::cos(2 * kPi * x[0]), 0.0)));
    err = std::max(err, std::abs(h.entry(i, 1, 1)));
    err = std::max(err, std::abs(h.entry(i, 0, 1)));
  }
  CHECK(err <= 1e-12);
}

TEST_CASE("complex_hessian of a constant vanishes") {
  const TorusGrid g(2, 8);
  const HermField h = complex_hessian(Field(g, 7.0));
  for (std::size_t i = 0; i < g.size(); i += 17)
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b) CHECK(std::abs(h.entry(i, a, b)) <= 1e-13);
}

TEST_CASE("complex_hessian of a mixed mode, spectral and finite differences") {
  const double a = 0.2;
  auto fn = [&](const std::vector<double>& x) { return a * std::cos(2 * kPi * (x[0] + x[3])); };
  double fd_err[2];
  int idx = 0;
  for (std::size_t N : {16u, 32u}) {
    const TorusGrid g(2, N);
    const Field phi = oracle::sample(g, fn);
    const HermField h = complex_hessian(phi);
    double spec_err = 0.0, fd = 0.0;
    std::vector<double> x(4);
    for (std::size_t i = 0; i < g.size(); ++i) {
      g.coords(i, x);
      const double c = -a * kPi * kPi * std::cos(2 * kPi * (x[0] + x[3]));
      spec_err = std::max(spec_err, std::abs(h.entry(i, 0, 0) - c));
      spec_err = std::max(spec_err, std::abs(h.entry(i, 1, 1) - c));
      spec_err = std::max(spec_err, std::abs(h.entry(i, 0, 1) - cplx(0.0, c)));
      spec_err = std::max(spec_err, std::abs(h.entry(i, 1, 0) - cplx(0.0, -c)));
      if (i % 7 == 0)
        for (std::size_t p = 0; p < 2; ++p)
          for (std::size_t q = 0; q < 2; ++q)
            fd = std::max(fd, std::abs(h.entry(i, p, q) - oracle::fd4_hessian(phi, i, p, q)));
    }
    CHECK(spec_err <= 1e-11);
    fd_err[idx++] = fd;
  }
  CHECK(fd_err[1] <= 1e-4 * a * kPi * kPi);
  // fourth-order convergence of the oracle towards the spectral values
  CHECK(fd_err[0] / fd_err[1] > 12.0);
}

TEST_CASE("complex_hessian is exact on resolved monomials") {
  const TorusGrid g(2, 8);
  // wavenumbers (2, -1, 0, 3), all below N / 2
  const int m[4] = {2, -1, 0, 3};
  auto arg = [&](const std::vector<double>& x) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j) s += m[j] * x[j];
    return 2 * kPi * s;
  };
  const Field phi = oracle::sample(g, [&](const std::vector<double>& x) { return std::sin(arg(x)); });
  const HermField h = complex_hessian(phi);
  double err = 0.0, mag = 0.0;
  std::vector<double> x(4);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.coords(i, x);
    const double s = std::sin(arg(x));
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b) {
        // d_a d_b-bar of e^{i theta} is -(pi^2) (m_xa - i m_ya)(m_xb + i m_yb) e^{i theta}
        const cplx za(m[2 * a], -m[2 * a + 1]), zb(m[2 * b], m[2 * b + 1]);
        const cplx want = -kPi * kPi * za * zb * s;
        err = std::max(err, std::abs(h.entry(i, a, b) - want));
        mag = std::max(mag, std::abs(want));
      }
  }
  CHECK(err <= 1e-11 * mag);
}

TEST_CASE("complex Laplacian is a quarter of the real Laplacian") {
  const TorusGrid g(2, 8);
  const Field phi = random_field(g, 2);
  std::vector<cplx> hat(phi.data().begin(), phi.data().end());
  hat = oracle::dft_nd(hat, 4, 8, false);
  std::vector<int> m(4);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.wavenumbers(i, m);
    double m2 = 0.0;
    for (int v : m) m2 += v * v;
    hat[i] *= -kPi * kPi * m2;
  }
  hat = oracle::dft_nd(hat, 4, 8, true);
  const Field lap = complex_laplacian(phi);
  const HermField h = complex_hessian(phi);
  double err = 0.0, err_tr = 0.0, mag = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    err = std::max(err, std::abs(lap[i] - hat[i].real()));
    err_tr = std::max(err_tr, std::abs(h.diag(0)[i] + h.diag(1)[i] - hat[i].real()));
    mag = std::max(mag, std::abs(hat[i]));
  }
  CHECK(err <= 1e-10 * mag);
  CHECK(err_tr <= 1e-10 * mag);
  CHECK(std::abs(mean(lap)) <= 1e-12 * phi.sup_norm() * mag);
}

TEST_CASE("HermField is pointwise Hermitian") {
  const TorusGrid g(3, 4);
  const HermField h = complex_hessian(random_field(g, 3));
  for (std::size_t i = 0; i < g.size(); i += 13)
    for (std::size_t a = 0; a < 3; ++a) {
      CHECK(h.entry(i, a, a).imag() == 0.0);
      for (std::size_t b = 0; b < 3; ++b) CHECK(h.entry(i, a, b) == std::conj(h.entry(i, b, a)));
    }
  CHECK(HermField::upper_index(3, 0, 1) == 0);
  CHECK(HermField::upper_index(3, 0, 2) == 1);
  CHECK(HermField::upper_index(3, 1, 2) == 2);
}

TEST_CASE("grad_sq examples") {
  const TorusGrid g(2, 16);
  CHECK(grad_sq(Field(g, 2.0)).sup_norm() <= 1e-20);
  const double a = 0.4;
  const Field phi = oracle::sample(g, [&](const std::vector<double>& x) { return a * std::cos(2 * kPi * x[0]); });
  const Field b = grad_sq(phi);
  double err = 0.0;
  std::vector<double> x(4);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.coords(i, x);
    const double s = std::sin(2 * kPi * x[0]);
    err = std::max(err, std::abs(b[i] - a * a * kPi * kPi * s * s));
  }
  CHECK(err <= 1e-12);
}

TEST_CASE("mean of grad_sq agrees with Parseval") {
  const TorusGrid g(2, 8);
  const Field phi = random_field(g, 4);
  std::vector<cplx> hat(phi.data().begin(), phi.data().end());
  hat = oracle::dft_nd(hat, 4, 8, false);
  double parseval = 0.0;
  std::vector<int> m(4);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.wavenumbers(i, m);
    double m2 = 0.0;
    for (int v : m)
      if (std::abs(v) != 4) m2 += v * v;  // first derivatives drop the Nyquist mode
    parseval += std::norm(hat[i] / static_cast<double>(g.size())) * kPi * kPi * m2;
  }
  CHECK(mean(grad_sq(phi)) == Approx(parseval).epsilon(1e-10));
}

TEST_CASE("complex_gradient of a single mode") {
  const TorusGrid g(1, 8);
  const Field phi = oracle::sample(g, [](const std::vector<double>& x) { return std::sin(2 * kPi * x[1]); });
  const auto grad = complex_gradient(phi);
  std::vector<double> x(2);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.coords(i, x);
    // (d_x - i d_y)/2 of sin(2 pi y) = -i pi cos(2 pi y)
    CHECK(std::abs(grad[0][i] - cplx(0.0, -kPi * std::cos(2 * kPi * x[1]))) <= 1e-13);
  }
}

TEST_CASE("mean and laplace_inverse examples") {
  const TorusGrid g(2, 8);
  const Field c = oracle::sample(g, [](const std::vector<double>& x) { return std::cos(2 * kPi * x[0]); });
  CHECK(std::abs(mean(c)) <= 1e-16);
  CHECK(mean(Field(g, 2.5)) == Approx(2.5));
  const Field psi = laplace_inverse(c);
  CHECK(max_diff(psi, (-1.0 / (kPi * kPi)) * c) <= 1e-14);

  CHECK(laplace_inverse(Field(g, 0.0)).sup_norm() == 0.0);
  CHECK_THROWS_AS(laplace_inverse(Field(g, 1.0)), CompatibilityError);

  const Field r = project_mean_zero(random_field(g, 5));
  CHECK(std::abs(mean(r)) <= 1e-15);
  const Field back = complex_laplacian(laplace_inverse(r));
  CHECK(max_diff(back, r) <= 1e-10 * r.sup_norm());
  CHECK(std::abs(mean(laplace_inverse(r))) <= 1e-15);
}

TEST_CASE("field files round-trip exactly") {
  const auto dir = oracle::tmp_dir("field_io");
  const TorusGrid g(2, 4);
  const Field f = random_field(g, 6);
  write_field(dir / "f.json", f);
  CHECK(payload_path(dir / "f.json") == dir / "f.f64");
  CHECK(std::filesystem::file_size(dir / "f.f64") == g.size() * 8);
  const Field back = read_field(dir / "f.json");
  CHECK(back.grid() == g);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(back[i] == f[i]);

  std::ifstream js(dir / "f.json");
  const auto doc = nlohmann::json::parse(js);
  CHECK(doc["magic"] == "chess-field");
  CHECK(doc["version"] == 1);
  CHECK(doc["axis_order"] == "x1,y1,x2,y2");
  CHECK(doc["dtype"] == "f64");
  CHECK(doc["endian"] == "little");
  CHECK(doc["layout"] == "row-major");
}

TEST_CASE("field files are validated") {
  const auto dir = oracle::tmp_dir("field_io_bad");
  const TorusGrid g(1, 4);
  write_field(dir / "f.json", Field(g, 1.0));
  CHECK_THROWS_AS(read_field(dir / "missing.json"), IoError);

  auto patch = [&](const char* key, nlohmann::json value) {
    std::ifstream in(dir / "f.json");
    auto doc = nlohmann::json::parse(in);
    doc[key] = value;
    std::ofstream(dir / "g.json") << doc.dump();
    std::filesystem::copy_file(dir / "f.f64", dir / "g.f64", std::filesystem::copy_options::overwrite_existing);
  };
  patch("magic", "other");
  CHECK_THROWS_AS(read_field(dir / "g.json"), ValidationError);
  patch("endian", "big");
  CHECK_THROWS_AS(read_field(dir / "g.json"), ValidationError);
  patch("N", 8);
  CHECK_THROWS_AS(read_field(dir / "g.json"), ValidationError);
  std::ofstream(dir / "h.json") << "{not json";
  CHECK_THROWS_AS(read_field(dir / "h.json"), ValidationError);
}
