#include "core/manufactured.hpp"

#include <cmath>
#include <vector>

namespace mlswe {

using C = std::complex<double>;

void ExactSolution::eval_real(double x1, double x2, double t, double *h,
                              double *u, double *v, double &b) const {
  const int M = layers();
  std::vector<C> hc(M), uc(M), vc(M);
  C bc;
  eval(C(x1), C(x2), C(t), hc.data(), uc.data(), vc.data(), bc);
  for (int m = 0; m < M; ++m) {
    h[m] = hc[m].real();
    u[m] = uc[m].real();
    v[m] = vc[m].real();
  }
  b = bc.real();
}

namespace {

constexpr double kStep = 1e-100; // complex-step size; derivatives are Im/h

template <typename T>
T layer_z_of(const LayerSystem &sys, const T *h, T b, int m) {
  const int M = sys.layers();
  T z = b;
  for (int k = m + 1; k <= M; ++k)
    z += h[k - 1];
  for (int k = 1; k < m; ++k)
    z += sys.density_ratio(k, m) * h[k - 1];
  return z;
}

struct Probe {
  std::vector<C> h, u, v;
  C b;
  explicit Probe(int M) : h(M), u(M), v(M) {}
};

} // namespace

void manufactured_source(const LayerSystem &sys, const ExactSolution &exact,
                         bool two_dim, double x1, double x2, double t,
                         double *S) {
  const int M = sys.layers();
  const double g = sys.g();
  const C ih(0.0, kStep);
  Probe pt(M), px(M), py(M), p0(M);

  exact.eval(C(x1), C(x2), C(t) + ih, pt.h.data(), pt.u.data(), pt.v.data(),
             pt.b);
  exact.eval(C(x1) + ih, C(x2), C(t), px.h.data(), px.u.data(), px.v.data(),
             px.b);
  if (two_dim)
    exact.eval(C(x1), C(x2) + ih, C(t), py.h.data(), py.u.data(), py.v.data(),
               py.b);
  exact.eval(C(x1), C(x2), C(t), p0.h.data(), p0.u.data(), p0.v.data(), p0.b);

  auto im = [](C z) { return z.imag() / kStep; };

  for (int m = 0; m < M; ++m) {
    // d/dt of (h, hu, hv)
    S[3 * m] = im(pt.h[m]);
    S[3 * m + 1] = im(pt.h[m] * pt.u[m]);
    S[3 * m + 2] = im(pt.h[m] * pt.v[m]);
    // d/dx1 of F1
    S[3 * m] += im(px.h[m] * px.u[m]);
    S[3 * m + 1] +=
        im(px.h[m] * px.u[m] * px.u[m] + 0.5 * g * px.h[m] * px.h[m]);
    S[3 * m + 2] += im(px.h[m] * px.u[m] * px.v[m]);
    if (two_dim) {
      // d/dx2 of F2
      S[3 * m] += im(py.h[m] * py.v[m]);
      S[3 * m + 1] += im(py.h[m] * py.u[m] * py.v[m]);
      S[3 * m + 2] +=
          im(py.h[m] * py.v[m] * py.v[m] + 0.5 * g * py.h[m] * py.h[m]);
    }
    // nonconservative coupling g h_m dz_m/dx_l
    const double hm = p0.h[m].real();
    S[3 * m + 1] += g * hm * im(layer_z_of(sys, px.h.data(), px.b, m + 1));
    if (two_dim)
      S[3 * m + 2] += g * hm * im(layer_z_of(sys, py.h.data(), py.b, m + 1));
  }
}

namespace {

class TrigSolution final : public ExactSolution {
public:
  TrigSolution(std::vector<double> offs, bool two_dim)
      : offs_(std::move(offs)), two_dim_(two_dim) {}
  int layers() const override { return static_cast<int>(offs_.size()); }
  void eval(C x1, C x2, C t, C *h, C *u, C *v, C &b) const override {
    const double pi = M_PI;
    const C ct = std::cos(pi * t), st = std::sin(pi * t);
    const C c1 = std::cos(pi * x1), s1 = std::sin(pi * x1);
    const C c2 = std::cos(pi * x2), s2 = std::sin(pi * x2);
    for (std::size_t m = 0; m < offs_.size(); ++m) {
      h[m] = two_dim_ ? ct * c1 + ct * c2 + offs_[m] : ct * c1 + offs_[m];
      u[m] = st * s1 / h[m];
      v[m] = two_dim_ ? st * s2 / h[m] : C(0.0);
    }
    b = two_dim_ ? s1 + s2 + 1.5 : s1 + 1.5;
  }

private:
  std::vector<double> offs_;
  bool two_dim_;
};

class VortexSolution final : public ExactSolution {
public:
  VortexSolution(double u_max, double g) : umax_(u_max), g_(g) {}
  int layers() const override { return 2; }
  void eval(C x1, C x2, C t, C *h, C *u, C *v, C &b) const override {
    h[0] = C(5.0);
    u[0] = C(0.0);
    v[0] = C(0.0);
    const C r2 = (x1 - t) * (x1 - t) + (x2 - t) * (x2 - t);
    const C e = std::exp(1.0 - r2);
    h[1] = 1.0 - umax_ * umax_ * e / (2.0 * g_);
    const C ring = umax_ * std::exp(0.5 * (1.0 - r2));
    u[1] = 1.0 - ring * (x2 - t);
    v[1] = 1.0 + ring * (x1 - t);
    b = C(0.0);
  }

private:
  double umax_, g_;
};

} // namespace

std::shared_ptr<const ExactSolution>
make_trig_solution(std::vector<double> depth_offsets, bool two_dim) {
  return std::make_shared<TrigSolution>(std::move(depth_offsets), two_dim);
}

std::shared_ptr<const ExactSolution> make_vortex_solution(double u_max,
                                                          double g) {
  return std::make_shared<VortexSolution>(u_max, g);
}

} // namespace mlswe
