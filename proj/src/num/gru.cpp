// SPDX-License-Identifier: Apache-2.0
#include "sembert/num/gru.hpp"

#include <cmath>

#include "sembert/error.hpp"
#include "sembert/num/ops.hpp"

namespace sembert::num {

namespace {

double logistic(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Tensor run_direction(const Tensor& seq, const GruParams& p, bool reverse) {
  const std::size_t n = seq.rows();
  const std::size_t h = p.hidden();
  Tensor proj = linear(seq, p.w_x, p.b);
  Tensor state = Tensor::zeros({1, h});
  std::vector<Tensor> states(n);
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t i = reverse ? n - 1 - step : step;
    state = gru_cell(slice_rows(proj, i, 1), state, p.w_h);
    states[i] = state;
  }
  return concat_rows(states);
}

}  // namespace

GruParams GruParams::init(std::size_t d_in, std::size_t hidden, Rng& rng) {
  return {xavier_uniform(d_in, 3 * hidden, rng), xavier_uniform(hidden, 3 * hidden, rng),
          zero_param({3 * hidden})};
}

GruParams GruParams::zeros(std::size_t d_in, std::size_t hidden) {
  return {zero_param({d_in, 3 * hidden}), zero_param({hidden, 3 * hidden}),
          zero_param({3 * hidden})};
}

void GruParams::append_to(ParamList& out, const std::string& prefix) const {
  out.push_back({prefix + ".w_x", w_x, true});
  out.push_back({prefix + ".w_h", w_h, true});
  out.push_back({prefix + ".b", b, false});
}

BiGruParams BiGruParams::init(std::size_t d_in, std::size_t hidden, Rng& rng) {
  auto fwd = GruParams::init(d_in, hidden, rng);
  auto bwd = GruParams::init(d_in, hidden, rng);
  return {std::move(fwd), std::move(bwd)};
}

BiGruParams BiGruParams::zeros(std::size_t d_in, std::size_t hidden) {
  return {GruParams::zeros(d_in, hidden), GruParams::zeros(d_in, hidden)};
}

void BiGruParams::append_to(ParamList& out, const std::string& prefix) const {
  fwd.append_to(out, prefix + ".fwd");
  bwd.append_to(out, prefix + ".bwd");
}

Tensor gru_cell(const Tensor& x_proj, const Tensor& h_prev, const Tensor& w_h) {
  const std::size_t h = h_prev.cols();
  if (h_prev.rows() != 1 || x_proj.rows() != 1 || x_proj.cols() != 3 * h ||
      w_h.rows() != h || w_h.cols() != 3 * h) {
    throw DimensionError("gru_cell: x_proj " + shape_str(x_proj.shape()) + ", h " +
                         shape_str(h_prev.shape()) + ", Wh " + shape_str(w_h.shape()));
  }
  auto xp = x_proj.values();
  auto hp = h_prev.values();
  auto wh = w_h.values();
  const std::size_t g = 3 * h;
  std::vector<double> z(h), r(h), cand(h), out(h);
  for (std::size_t j = 0; j < h; ++j) {
    double az = xp[j], ar = xp[h + j];
    for (std::size_t k = 0; k < h; ++k) {
      az += hp[k] * wh[k * g + j];
      ar += hp[k] * wh[k * g + h + j];
    }
    z[j] = logistic(az);
    r[j] = logistic(ar);
  }
  for (std::size_t j = 0; j < h; ++j) {
    double an = xp[2 * h + j];
    for (std::size_t k = 0; k < h; ++k) an += r[k] * hp[k] * wh[k * g + 2 * h + j];
    cand[j] = std::tanh(an);
    out[j] = (1.0 - z[j]) * cand[j] + z[j] * hp[j];
  }
  return detail::make_result(
      {1, h}, std::move(out), {x_proj, h_prev, w_h},
      [h, g, z = std::move(z), r = std::move(r), cand = std::move(cand)](detail::Node& self) {
        const auto& hp = self.parents[1]->value;
        const auto& wh = self.parents[2]->value;
        const auto& dout = self.grad;
        std::vector<double> da_z(h), da_r(h), da_n(h), dh(h, 0.0);
        for (std::size_t j = 0; j < h; ++j) {
          const double dn = dout[j] * (1.0 - z[j]);
          const double dz = dout[j] * (hp[j] - cand[j]);
          dh[j] += dout[j] * z[j];
          da_n[j] = dn * (1.0 - cand[j] * cand[j]);
          da_z[j] = dz * z[j] * (1.0 - z[j]);
        }
        for (std::size_t k = 0; k < h; ++k) {
          double s = 0.0;
          for (std::size_t j = 0; j < h; ++j) s += wh[k * g + 2 * h + j] * da_n[j];
          dh[k] += s * r[k];
          const double dr = s * hp[k];
          da_r[k] = dr * r[k] * (1.0 - r[k]);
        }
        if (double* gx = detail::parent_grad(self, 0)) {
          for (std::size_t j = 0; j < h; ++j) {
            gx[j] += da_z[j];
            gx[h + j] += da_r[j];
            gx[2 * h + j] += da_n[j];
          }
        }
        if (double* gw = detail::parent_grad(self, 2)) {
          for (std::size_t k = 0; k < h; ++k)
            for (std::size_t j = 0; j < h; ++j) {
              gw[k * g + j] += hp[k] * da_z[j];
              gw[k * g + h + j] += hp[k] * da_r[j];
              gw[k * g + 2 * h + j] += r[k] * hp[k] * da_n[j];
            }
        }
        if (double* gh = detail::parent_grad(self, 1)) {
          for (std::size_t k = 0; k < h; ++k) {
            double s = dh[k];
            for (std::size_t j = 0; j < h; ++j)
              s += wh[k * g + j] * da_z[j] + wh[k * g + h + j] * da_r[j];
            gh[k] += s;
          }
        }
      });
}

Tensor bigru_forward(const Tensor& seq, const BiGruParams& params) {
  if (seq.rows() == 0) throw PreconditionError("bigru_forward: empty sequence");
  if (seq.cols() != params.fwd.input() || seq.cols() != params.bwd.input()) {
    throw DimensionError("bigru_forward: input " + shape_str(seq.shape()) + " vs Wx " +
                         shape_str(params.fwd.w_x.shape()));
  }
  return concat_cols({run_direction(seq, params.fwd, false), run_direction(seq, params.bwd, true)});
}

}  // namespace sembert::num
