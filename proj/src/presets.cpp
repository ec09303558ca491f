// Copyright 2026 The dirlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dirlab/presets.hpp"

#include <cmath>

#include "dirlab/errors.hpp"
#include "dirlab/freefield.hpp"

namespace dirlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double bump_phi(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

std::vector<double> parse_args(const std::string& name, std::size_t pos) {
  std::vector<double> args;
  std::string rest = name.substr(pos);
  std::size_t start = 0;
  while (start <= rest.size()) {
    const auto comma = rest.find(',', start);
    const std::string tok =
        rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!tok.empty()) args.push_back(std::stod(tok));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return args;
}

}  // namespace

double smooth_step_down(double q) {
  if (q <= 0.0) return 1.0;
  if (q >= 1.0) return 0.0;
  const double a = bump_phi(1.0 - q);
  const double b = bump_phi(q);
  return a / (a + b);
}

std::vector<double> make_initial_datum(const std::string& name, const GridGeometry& geom) {
  const int d = geom.d();
  std::vector<double> f(geom.size(), 0.0);
  std::vector<double> x(d);
  if (name == "one") {
    for (auto& v : f) v = 1.0;
    return f;
  }
  if (name.rfind("plateau:", 0) == 0) {
    const auto args = parse_args(name, 8);
    if (args.size() != 2 || !(0.0 < args[0] && args[0] < args[1]))
      throw ConfigError("initial datum 'plateau:r0,r1' needs 0 < r0 < r1");
    for (std::size_t node = 0; node < geom.size(); ++node) {
      geom.point(node, x);
      double r2 = 0.0;
      for (double xi : x) r2 += xi * xi;
      f[node] = smooth_step_down((std::sqrt(r2) - args[0]) / (args[1] - args[0]));
    }
    return f;
  }
  if (name.rfind("gauss:", 0) == 0) {
    const auto args = parse_args(name, 6);
    if (args.size() != 1 || !(args[0] > 0.0))
      throw ConfigError("initial datum 'gauss:s' needs s > 0");
    const double s2 = args[0] * args[0];
    for (std::size_t node = 0; node < geom.size(); ++node) {
      geom.point(node, x);
      double r2 = 0.0;
      for (double xi : x) r2 += xi * xi;
      f[node] = std::exp(-0.5 * r2 / s2);
    }
    return f;
  }
  throw ConfigError("unknown initial datum preset '" + name + "'");
}

DriftFieldFD make_drift(const std::string& name, int d) {
  DriftFieldFD drift;
  drift.name = name;
  drift.d = d;
  const auto ud = static_cast<std::size_t>(d);
  if (name == "zero") {
    drift.eval = [](std::span<const double>, std::span<double> b) {
      for (auto& v : b) v = 0.0;
    };
    drift.jacobian = [](std::span<const double>, std::span<double> j) {
      for (auto& v : j) v = 0.0;
    };
    drift.divergence = [](std::span<const double>) { return 0.0; };
    drift.alpha_part = drift.eval;
    drift.delta_part = drift.eval;
    return drift;
  }
  if (name == "ou" || name == "plus_x") {
    const double sign = (name == "ou") ? -1.0 : 1.0;
    drift.eval = [sign](std::span<const double> x, std::span<double> b) {
      for (std::size_t a = 0; a < b.size(); ++a) b[a] = sign * x[a];
    };
    drift.jacobian = [sign, ud](std::span<const double>, std::span<double> j) {
      for (auto& v : j) v = 0.0;
      for (std::size_t a = 0; a < ud; ++a) j[a * ud + a] = sign;
    };
    drift.divergence = [sign, d](std::span<const double>) { return sign * d; };
    drift.delta_part = drift.eval;
    drift.alpha_part = [](std::span<const double>, std::span<double> b) {
      for (auto& v : b) v = 0.0;
    };
    return drift;
  }
  if (name == "rotation" || name == "spiral") {
    if (d != 2) throw ConfigError("drift '" + name + "' is two-dimensional");
    const double pull = (name == "spiral") ? -1.0 : 0.0;
    drift.eval = [pull](std::span<const double> x, std::span<double> b) {
      b[0] = pull * x[0] + x[1];
      b[1] = pull * x[1] - x[0];
    };
    drift.jacobian = [pull](std::span<const double>, std::span<double> j) {
      // j[i*2+k] = d b_k / d x_i
      j[0] = pull;
      j[1] = -1.0;
      j[2] = 1.0;
      j[3] = pull;
    };
    drift.divergence = [pull](std::span<const double>) { return 2.0 * pull; };
    drift.delta_part = drift.eval;
    drift.alpha_part = [](std::span<const double>, std::span<double> b) {
      for (auto& v : b) v = 0.0;
    };
    return drift;
  }
  if (name.rfind("ou_sin:", 0) == 0) {
    const auto args = parse_args(name, 7);
    if (args.size() != 1) throw ConfigError("drift 'ou_sin:kappa' needs one parameter");
    const double kappa = args[0];
    drift.eval = [kappa](std::span<const double> x, std::span<double> b) {
      for (std::size_t a = 0; a < b.size(); ++a) b[a] = -x[a] - kappa * std::sin(x[a]);
    };
    drift.jacobian = [kappa, ud](std::span<const double> x, std::span<double> j) {
      for (auto& v : j) v = 0.0;
      for (std::size_t a = 0; a < ud; ++a) j[a * ud + a] = -1.0 - kappa * std::cos(x[a]);
    };
    drift.divergence = [kappa, d](std::span<const double> x) {
      double s = 0.0;
      for (int a = 0; a < d; ++a) s += -1.0 - kappa * std::cos(x[static_cast<std::size_t>(a)]);
      return s;
    };
    drift.delta_part = [](std::span<const double> x, std::span<double> b) {
      for (std::size_t a = 0; a < b.size(); ++a) b[a] = -x[a];
    };
    drift.alpha_part = [kappa](std::span<const double> x, std::span<double> b) {
      for (std::size_t a = 0; a < b.size(); ++a) b[a] = -kappa * std::sin(x[a]);
    };
    return drift;
  }
  throw ConfigError("unknown drift preset '" + name + "'");
}

namespace {

double gauss_sin_log_partition_1d(double kappa) {
  // Simpson over [-12, 12]; the integrand is e^{-s^2/2 + kappa cos s}.
  const int n = 4000;  // even
  const double a = -12.0, b = 12.0;
  const double h = (b - a) / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double s = a + h * i;
    const double v = std::exp(-0.5 * s * s + kappa * std::cos(s));
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * v;
  }
  return std::log(acc * h / 3.0);
}

}  // namespace

ReferenceMeasureFD make_measure(const std::string& name, int d) {
  ReferenceMeasureFD m;
  m.name = name;
  m.d = d;
  if (name == "gauss_delta" || name == "gauss_alpha") {
    m.log_density = [](std::span<const double> x) {
      double s = 0.0;
      for (double xi : x) s += xi * xi;
      return -0.5 * s;
    };
    m.beta = [](std::span<const double> x, std::span<double> b) {
      for (std::size_t a = 0; a < b.size(); ++a) b[a] = -x[a];
    };
    auto zero = [](std::span<const double>, std::span<double> b) {
      for (auto& v : b) v = 0.0;
    };
    if (name == "gauss_delta") {
      m.delta_part = m.beta;
      m.alpha_part = zero;
      m.delta_jacobian = [d](std::span<const double>, std::span<double> j) {
        for (auto& v : j) v = 0.0;
        for (int a = 0; a < d; ++a) j[static_cast<std::size_t>(a) * d + a] = -1.0;
      };
    } else {
      m.alpha_part = m.beta;
      m.delta_part = zero;
      m.delta_jacobian = [](std::span<const double>, std::span<double> j) {
        for (auto& v : j) v = 0.0;
      };
    }
    m.log_partition = 0.5 * d * std::log(2.0 * kPi);
    return m;
  }
  if (name.rfind("gauss_sin:", 0) == 0) {
    const auto args = parse_args(name, 10);
    if (args.size() != 1) throw ConfigError("measure 'gauss_sin:kappa' needs one parameter");
    const double kappa = args[0];
    m.log_density = [kappa](std::span<const double> x) {
      double s = 0.0;
      for (double xi : x) s += -0.5 * xi * xi + kappa * std::cos(xi);
      return s;
    };
    m.beta = [kappa](std::span<const double> x, std::span<double> b) {
      for (std::size_t a = 0; a < b.size(); ++a) b[a] = -x[a] - kappa * std::sin(x[a]);
    };
    m.delta_part = [](std::span<const double> x, std::span<double> b) {
      for (std::size_t a = 0; a < b.size(); ++a) b[a] = -x[a];
    };
    m.alpha_part = [kappa](std::span<const double> x, std::span<double> b) {
      for (std::size_t a = 0; a < b.size(); ++a) b[a] = -kappa * std::sin(x[a]);
    };
    m.delta_jacobian = [d](std::span<const double>, std::span<double> j) {
      for (auto& v : j) v = 0.0;
      for (int a = 0; a < d; ++a) j[static_cast<std::size_t>(a) * d + a] = -1.0;
    };
    m.log_partition = d * gauss_sin_log_partition_1d(kappa);
    return m;
  }
  throw ConfigError("unknown measure preset '" + name + "'");
}

ApproximationLadder make_gauss_sin_ladder(double kappa, int d, int max_n, int max_m,
                                          double cutoff_radius) {
  ApproximationLadder ladder;
  ladder.name = "gauss_sin";
  ladder.d = d;
  ladder.measure = make_measure("gauss_sin:" + std::to_string(kappa), d);
  ladder.max_n = max_n;
  ladder.max_m = max_m;
  ladder.gamma = 0.0;  // reference drift is the exact logarithmic derivative
  ladder.cutoff_radius = cutoff_radius;
  ladder.alpha_n = [kappa](int n, std::span<const double> x, std::span<double> out) {
    const double scale = 1.0 - std::pow(3.0, -static_cast<double>(n));
    for (std::size_t a = 0; a < out.size(); ++a)
      out[a] = -scale * kappa * std::sin(x[a]);
  };
  ladder.delta_m = [](int m, std::span<const double> x, std::span<double> out) {
    for (std::size_t a = 0; a < out.size(); ++a)
      out[a] = (static_cast<int>(a) < m) ? -x[a] : 0.0;
  };
  ladder.rung_jacobian = [kappa, d](int n, int m, std::span<const double> x,
                                    std::span<double> j) {
    const double scale = n < 0 ? 1.0 : 1.0 - std::pow(3.0, -static_cast<double>(n));
    const int mm = m < 0 ? d : m;
    for (auto& v : j) v = 0.0;
    for (int a = 0; a < d; ++a) {
      double diag = -scale * kappa * std::cos(x[static_cast<std::size_t>(a)]);
      if (a < mm) diag += -1.0;
      j[static_cast<std::size_t>(a) * d + a] = diag;
    }
  };
  ladder.rung_divergence = [kappa, d](int n, int m, std::span<const double> x) {
    const double scale = n < 0 ? 1.0 : 1.0 - std::pow(3.0, -static_cast<double>(n));
    const int mm = m < 0 ? d : m;
    double s = 0.0;
    for (int a = 0; a < d; ++a) {
      s += -scale * kappa * std::cos(x[static_cast<std::size_t>(a)]);
      if (a < mm) s += -1.0;
    }
    return s;
  };
  return ladder;
}

namespace {

CylinderFunction scalar_component(const std::string& name, int d,
                                  std::function<double(std::span<const double>)> value,
                                  std::function<void(std::span<const double>, std::span<double>)> grad) {
  CylinderFunction f;
  f.name = name;
  f.base_dim = static_cast<std::size_t>(d);
  f.value = std::move(value);
  f.gradient = std::move(grad);
  return f;
}

}  // namespace

std::vector<TrialVectorField> make_trial_fields(int d, double R) {
  std::vector<TrialVectorField> fields;
  auto zero_grad = [](std::span<const double>, std::span<double> g) {
    for (auto& v : g) v = 0.0;
  };

  for (int a = 0; a < d; ++a) {
    TrialVectorField constant;
    constant.name = "const_e" + std::to_string(a + 1);
    for (int i = 0; i < d; ++i) {
      const double v = (i == a) ? 1.0 : 0.0;
      constant.components.push_back(scalar_component(
          "const", d, [v](std::span<const double>) { return v; }, zero_grad));
    }
    fields.push_back(std::move(constant));
  }

  TrialVectorField identity;
  identity.name = "identity";
  for (int i = 0; i < d; ++i) {
    identity.components.push_back(scalar_component(
        "coord", d, [i](std::span<const double> x) { return x[static_cast<std::size_t>(i)]; },
        [i](std::span<const double>, std::span<double> g) {
          for (auto& v : g) v = 0.0;
          g[static_cast<std::size_t>(i)] = 1.0;
        }));
  }
  fields.push_back(std::move(identity));

  const double freq = 0.5 * kPi / R;
  TrialVectorField sine;
  sine.name = "sine";
  for (int i = 0; i < d; ++i) {
    sine.components.push_back(scalar_component(
        "sine", d,
        [i, freq](std::span<const double> x) {
          return std::sin(freq * x[static_cast<std::size_t>(i)]);
        },
        [i, freq](std::span<const double> x, std::span<double> g) {
          for (auto& v : g) v = 0.0;
          g[static_cast<std::size_t>(i)] =
              freq * std::cos(freq * x[static_cast<std::size_t>(i)]);
        }));
  }
  fields.push_back(std::move(sine));

  TrialVectorField envelope;
  envelope.name = "gauss_envelope";
  for (int i = 0; i < d; ++i) {
    envelope.components.push_back(scalar_component(
        "envelope", d,
        [i](std::span<const double> x) {
          double r2 = 0.0;
          for (double xi : x) r2 += xi * xi;
          return x[static_cast<std::size_t>(i)] * std::exp(-0.5 * r2);
        },
        [i, d](std::span<const double> x, std::span<double> g) {
          double r2 = 0.0;
          for (double xi : x) r2 += xi * xi;
          const double e = std::exp(-0.5 * r2);
          for (int a = 0; a < d; ++a)
            g[static_cast<std::size_t>(a)] =
                ((a == i ? 1.0 : 0.0) -
                 x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(i)]) *
                e;
        }));
  }
  fields.push_back(std::move(envelope));

  if (d == 2) {
    TrialVectorField rot;
    rot.name = "rotation";
    rot.components.push_back(scalar_component(
        "rot1", d, [](std::span<const double> x) { return x[1]; },
        [](std::span<const double>, std::span<double> g) {
          g[0] = 0.0;
          g[1] = 1.0;
        }));
    rot.components.push_back(scalar_component(
        "rot2", d, [](std::span<const double> x) { return -x[0]; },
        [](std::span<const double>, std::span<double> g) {
          g[0] = -1.0;
          g[1] = 0.0;
        }));
    fields.push_back(std::move(rot));
  }
  return fields;
}

MehlerOracle::MehlerOracle(const std::function<double(std::span<const double>)>& f, int d,
                           double support_radius, int quad_order)
    : d_(d), order_(quad_order), radius_(support_radius) {
  if (d < 1 || d > 2) throw DomainError("MehlerOracle: d must be 1 or 2");
  std::vector<double> gx, gw;
  gauss_legendre_rule(quad_order, gx, gw);
  nodes_.resize(static_cast<std::size_t>(quad_order));
  weights_.resize(static_cast<std::size_t>(quad_order));
  for (int i = 0; i < quad_order; ++i) {
    nodes_[static_cast<std::size_t>(i)] = support_radius * gx[static_cast<std::size_t>(i)];
    weights_[static_cast<std::size_t>(i)] =
        support_radius * gw[static_cast<std::size_t>(i)];
  }
  if (d == 1) {
    f_table_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const double p[1] = {nodes_[i]};
      f_table_[i] = f(std::span<const double>(p, 1));
    }
  } else {
    f_table_.resize(nodes_.size() * nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      for (std::size_t j = 0; j < nodes_.size(); ++j) {
        const double p[2] = {nodes_[i], nodes_[j]};
        f_table_[i * nodes_.size() + j] = f(std::span<const double>(p, 2));
      }
    }
  }
}

double MehlerOracle::value(std::span<const double> x, double t) const {
  const double decay = std::exp(-t);
  const double var = 1.0 - std::exp(-2.0 * t);
  const double inv2var = 0.5 / var;
  const double norm = 1.0 / std::sqrt(2.0 * kPi * var);
  const std::size_t q = nodes_.size();
  // Per-axis Gaussian weights against the datum table.
  std::vector<double> wx(q), wy;
  for (std::size_t i = 0; i < q; ++i) {
    const double dy = nodes_[i] - decay * x[0];
    wx[i] = weights_[i] * norm * std::exp(-dy * dy * inv2var);
  }
  if (d_ == 1) {
    double acc = 0.0;
    for (std::size_t i = 0; i < q; ++i) acc += wx[i] * f_table_[i];
    return acc;
  }
  wy.resize(q);
  for (std::size_t j = 0; j < q; ++j) {
    const double dy = nodes_[j] - decay * x[1];
    wy[j] = weights_[j] * norm * std::exp(-dy * dy * inv2var);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < q; ++i) {
    double row = 0.0;
    const double* frow = f_table_.data() + i * q;
    for (std::size_t j = 0; j < q; ++j) row += wy[j] * frow[j];
    acc += wx[i] * row;
  }
  return acc;
}

double heat_gaussian_value(int d, std::span<const double> x, double t, double s) {
  const double v = s * s + 2.0 * t;
  double r2 = 0.0;
  for (int a = 0; a < d; ++a) r2 += x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
  return std::pow(s * s / v, 0.5 * d) * std::exp(-0.5 * r2 / v);
}

}  // namespace dirlab
