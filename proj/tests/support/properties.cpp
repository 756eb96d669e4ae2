#include "properties.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "dtcns/engine.hpp"
#include "dtcns/epidemic.hpp"
#include "dtcns/interaction.hpp"
#include "dtcns/td3.hpp"

namespace dtcns::testing {

namespace {

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

}  // namespace

CheckResult infection_probability_monte_carlo(int trials, std::uint64_t seed) {
  SimConfig cfg;
  cfg.num_nodes = 4;
  TemporalNetwork base = new_network(cfg, seed);
  base.node(1).health = Health::Infected;
  base.node(1).recovery_clock = 1000;
  base.node(2).health = Health::Infected;
  base.node(2).recovery_clock = 1000;
  base.edge(1, 0).interacted = true;
  base.edge(0, 2).interacted = true;
  base.edge(2, 0).interacted = true;
  base.edge(3, 0).interacted = true;  // healthy partner, no exposure
  const double zeta = 0.10;
  const double p = infection_probability(base, 0, zeta);
  EpidemicState epi;
  epi.transmissibility = zeta;
  epi.recovery_ticks = 1000;

  Rng rng = make_stream(seed, Stream::Epidemic);
  long hits = 0;
  for (int t = 0; t < trials; ++t) {
    TemporalNetwork net = base;
    step_epidemic(net, epi, rng);
    if (net.node(0).infected()) ++hits;
  }
  const double freq = static_cast<double>(hits) / trials;
  const double se = std::sqrt(p * (1.0 - p) / trials);
  CheckResult r;
  r.ok = std::abs(p - 0.271) < 1e-12 && std::abs(freq - p) <= 3.0 * se;
  r.detail = fmt("p=%.6f empirical=%.6f 3se=%.6f", p, freq, 3.0 * se);
  return r;
}

namespace {

double dot_loss(const DenseNet& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& c) {
  return net.predict(x).cwiseProduct(c).sum();
}

double rel_error(double a, double n) {
  return std::abs(a - n) / std::max({1e-6, std::abs(a), std::abs(n)});
}

// Smallest |pre-activation| over all layers feeding a rectifier.
double min_kink_distance(const DenseNet& net, const Eigen::MatrixXd& x) {
  double m = 1e300;
  Eigen::MatrixXd a = x;
  const auto& layers = net.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    Eigen::MatrixXd z = layers[l].weight * a;
    z.colwise() += layers[l].bias;
    const bool last = l + 1 == layers.size();
    const Activation act = last ? net.output_activation() : net.hidden_activation();
    if (act == Activation::Relu) m = std::min(m, z.cwiseAbs().minCoeff());
    if (act == Activation::Relu) z = z.cwiseMax(0.0);
    if (act == Activation::Tanh) z = z.array().tanh().matrix();
    a = z;
  }
  return m;
}

template <class Loss>
double check_params(DenseNet& net, const Gradients& g, double h, Loss loss) {
  double worst = 0.0;
  auto& layers = net.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    auto probe = [&](double& param, double analytic) {
      const double saved = param;
      param = saved + h;
      const double up = loss();
      param = saved - h;
      const double down = loss();
      param = saved;
      worst = std::max(worst, rel_error(analytic, (up - down) / (2.0 * h)));
    };
    for (Eigen::Index r = 0; r < layers[l].weight.rows(); ++r)
      for (Eigen::Index c = 0; c < layers[l].weight.cols(); ++c)
        probe(layers[l].weight(r, c), g.weight[l](r, c));
    for (Eigen::Index r = 0; r < layers[l].bias.size(); ++r)
      probe(layers[l].bias(r), g.bias[l](r));
  }
  return worst;
}

}  // namespace

CheckResult gradient_check(int nets, std::uint64_t seed, double step, double tolerance) {
  Rng rng = make_stream(seed, Stream::Init);
  std::uniform_int_distribution<int> in_dim(1, 5), depth(1, 2), width(1, 6), out_dim(1, 3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Activation hidden_kinds[] = {Activation::Relu, Activation::Tanh, Activation::Identity};
  double worst = 0.0;
  int checked = 0;
  for (int k = 0; k < nets; ++k) {
    std::vector<int> sizes{in_dim(rng)};
    const int d = depth(rng);
    for (int l = 0; l < d; ++l) sizes.push_back(width(rng));
    sizes.push_back(out_dim(rng));
    DenseNet net(sizes, hidden_kinds[k % 3], k % 2 ? Activation::Tanh : Activation::Identity);
    net.init_uniform(rng);
    for (auto& layer : net.layers()) {
      layer.weight *= 1.5;
      layer.bias *= 1.5;
    }
    const int batch = 3;
    Eigen::MatrixXd x(sizes.front(), batch), c(sizes.back(), batch);
    do {
      for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = u(rng);
    } while (min_kink_distance(net, x) < 1e-2);
    for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = u(rng);

    net.forward(x);
    Eigen::MatrixXd dx;
    const Gradients g = net.backward(c, &dx);
    worst = std::max(worst, check_params(net, g, step, [&] { return dot_loss(net, x, c); }));
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      Eigen::MatrixXd xp = x, xm = x;
      xp.data()[i] += step;
      xm.data()[i] -= step;
      const double fd = (dot_loss(net, xp, c) - dot_loss(net, xm, c)) / (2.0 * step);
      worst = std::max(worst, rel_error(dx.data()[i], fd));
    }
    ++checked;
  }

  // Actor gradient through a critic, as used by the delayed policy update.
  for (int k = 0; k < std::max(1, nets / 5); ++k) {
    const int obs = 1 + k % 4, act = 1 + k % 3;
    DenseNet actor({obs, 5, act}, Activation::Tanh, Activation::Tanh);
    DenseNet critic({obs + act, 6, 1}, Activation::Tanh, Activation::Identity);
    actor.init_uniform(rng);
    critic.init_uniform(rng);
    Eigen::MatrixXd s(obs, 4);
    for (Eigen::Index i = 0; i < s.size(); ++i) s.data()[i] = u(rng);
    const Gradients g = actor_gradient(actor, critic, s);
    auto loss = [&] {
      const Eigen::MatrixXd a = actor.predict(s);
      Eigen::MatrixXd in(obs + act, s.cols());
      in.topRows(obs) = s;
      in.bottomRows(act) = a;
      return -critic.predict(in).mean();
    };
    worst = std::max(worst, check_params(actor, g, step, loss));
    ++checked;
  }

  CheckResult r;
  r.ok = checked >= nets && worst <= tolerance;
  r.detail = fmt("nets=%.0f worst relative error=%.3g (tolerance %.0e)", checked, worst, tolerance);
  return r;
}

CheckResult bond_symmetry_fuzz(int ticks, std::uint64_t seed) {
  SimConfig cfg;
  cfg.num_nodes = 8;
  cfg.ticks_per_day = 10;
  cfg.rl_epoch_ticks = 10;
  cfg.episode_days = ticks / cfg.ticks_per_day + 1;
  cfg.bond_window_ticks = 3;
  cfg.transmissibility = 0.2;
  cfg.recovery_days = 2.0;
  std::vector<Style> styles(8, Style::Ignorant);
  Environment env(cfg, styles, seed);
  Rng capital_rng = make_stream(seed, Stream::Placement);
  std::uniform_int_distribution<int> capital(1, cfg.num_nodes - 1);
  PolicySet none;
  long bonded_ticks = 0;
  for (int t = 0; t < ticks; ++t) {
    if (env.at_epoch_boundary()) {
      env.start_epoch();
      env.decide(none);
      for (NodeId i = 0; i < cfg.num_nodes; ++i)
        env.network().node(i).capital_limit = capital(capital_rng);
    }
    const auto rec = env.run_tick();
    bonded_ticks += rec.bonds > 0;
    const auto& net = env.network();
    for (NodeId i = 0; i < cfg.num_nodes; ++i)
      for (NodeId j = i + 1; j < cfg.num_nodes; ++j) {
        const auto& a = net.edge(i, j);
        const auto& b = net.edge(j, i);
        if (a.bonded != b.bonded || a.bond_intensity != b.bond_intensity)
          return {false, "asymmetric bond at tick " + std::to_string(t) + " pair (" +
                             std::to_string(i) + "," + std::to_string(j) + ")"};
      }
  }
  CheckResult r;
  r.ok = bonded_ticks > 0;
  r.detail = std::to_string(ticks) + " ticks, " + std::to_string(bonded_ticks) +
             " with at least one bond";
  return r;
}

namespace {

// Straight-line re-derivation of one tick from raw state.
struct Reference {
  int n;
  SimConfig cfg;
  std::vector<Style> style;
  std::vector<std::vector<double>> f;  // features
  std::vector<PreferenceGenome> genome;
  std::vector<int> spent, limit;
  std::vector<Health> health;
  std::vector<int> clock;
  std::vector<std::vector<std::vector<std::pair<int, double>>>> hist;  // [i][j] -> (tick, w)

  struct Tick {
    int interactions = 0, bonds = 0, infections = 0;
    std::vector<std::vector<int>> I;
    std::vector<std::vector<double>> wI, wB;
    std::vector<double> benefit;
    double reward = 0.0;
  };

  Tick step(int t, Rng& noise_rng, Rng& epi_rng) {
    Tick out;
    out.I.assign(n, std::vector<int>(n, 0));
    out.wI.assign(n, std::vector<double>(n, 0.0));
    out.wB.assign(n, std::vector<double>(n, 0.0));
    out.benefit.assign(n, 0.0);

    std::normal_distribution<double> noise(0.0, cfg.noise_sigma > 0 ? cfg.noise_sigma : 1.0);
    std::vector<std::vector<double>> score(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        double hr = 0.0, pr = 0.0;
        for (int k = 0; k < kNumFeatures; ++k)
          hr += std::abs(f[i][k] - f[j][k]) * genome[i].h[k] * genome[i].w_h[k];
        for (int k = 0; k < kNumFeatures; ++k) pr += f[j][k] * genome[i].p[k] * genome[i].w_p[k];
        const double hs = std::clamp(hr, 0.0, 1.0), ps = std::clamp(pr, 0.0, 1.0);
        const double eps = cfg.noise_sigma > 0 ? noise(noise_rng) : 0.0;
        score[i][j] = 0.5 * (hs + ps) + eps;
      }

    for (int i = 0; i < n; ++i) {
      const double base = cfg.threshold_for(style[i]);
      const double thr = health[i] == Health::Infected ? cfg.eta * base : base;
      std::vector<int> order;
      for (int j = 0; j < n; ++j)
        if (j != i) order.push_back(j);
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return score[i][a] > score[i][b]; });
      for (int j : order) {
        if (score[i][j] > thr && spent[i] < limit[i]) {
          ++spent[i];
          out.I[i][j] = 1;
          out.wI[i][j] = cfg.b + cfg.alpha * (score[i][j] - thr);
          hist[i][j].push_back({t, out.wI[i][j]});
          ++out.interactions;
        }
      }
    }

    const int w = cfg.bond_window_ticks;
    auto window_mean = [&](int i, int j, int& count) {
      double s = 0.0;
      count = 0;
      for (const auto& [tick, v] : hist[i][j])
        if (tick > t - w && tick <= t) {
          s += v;
          ++count;
        }
      return count ? s / count : 0.0;
    };
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        int cij = 0, cji = 0;
        const double mij = window_mean(i, j, cij), mji = window_mean(j, i, cji);
        const bool bonded = (out.I[i][j] && cji > 0) || (out.I[j][i] && cij > 0);
        if (bonded && mij > 0.0 && mji > 0.0) {
          out.wB[i][j] = out.wB[j][i] = 0.5 * (mij + mji);
          ++out.bonds;
        }
      }

    const double zeta = cfg.transmissibility;
    auto contacts = [&](int i, bool partner_infected) {
      int k = 0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const bool match = partner_infected ? health[j] == Health::Infected
                                            : health[j] == Health::Susceptible;
        if (match) k += out.I[i][j] + out.I[j][i];
      }
      return k;
    };
    auto risk_of = [&](int k) { return k == 0 ? 0.0 : 1.0 - std::pow(1.0 - zeta, k); };
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double bonds = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != i && out.wB[i][j] > 0.0) bonds += out.wB[i][j];
      double benefit = 0.0;
      if (bonds != 0.0) {
        if (health[i] == Health::Infected) {
          benefit = cfg.delta * bonds * (1.0 - risk_of(contacts(i, false)));
        } else {
          const double r = health[i] == Health::Susceptible ? risk_of(contacts(i, true)) : 0.0;
          benefit = bonds * (1.0 - r);
        }
      }
      out.benefit[i] = benefit;
      total += benefit;
    }
    out.reward = total / n;

    std::vector<double> p(n, 0.0);
    for (int i = 0; i < n; ++i)
      if (health[i] == Health::Susceptible) p[i] = risk_of(contacts(i, true));
    for (int i = 0; i < n; ++i)
      if (health[i] == Health::Infected && --clock[i] <= 0) {
        clock[i] = 0;
        health[i] = cfg.permanent_recovery ? Health::Recovered : Health::Susceptible;
        f[i][kHealthFeature] = 0.0;
      }
    for (int i = 0; i < n; ++i) {
      const double draw = uniform01(epi_rng);
      if (p[i] > 0.0 && draw < p[i]) {
        health[i] = Health::Infected;
        clock[i] = cfg.recovery_ticks();
        f[i][kHealthFeature] = 1.0;
        ++out.infections;
      }
    }
    return out;
  }
};

}  // namespace

CheckResult brute_force_pipeline(int ticks, std::uint64_t seed) {
  long compared = 0;
  for (int n = 2; n <= 4; ++n) {
    for (int variant = 0; variant < 2; ++variant) {
      SimConfig cfg;
      cfg.num_nodes = n;
      cfg.ticks_per_day = 10;
      cfg.rl_epoch_ticks = 5;
      cfg.episode_days = ticks / cfg.ticks_per_day + 1;
      cfg.recovery_days = 0.7;
      cfg.transmissibility = 0.3;
      cfg.threshold_cooperative = 0.2;
      cfg.threshold_egocentric = 0.25;
      cfg.threshold_ignorant = 0.15;
      cfg.bond_window_ticks = 1 + variant;
      cfg.noise_sigma = variant == 0 ? 0.01 : 0.0;
      const std::uint64_t run_seed = seed * 31 + static_cast<std::uint64_t>(n * 2 + variant);
      std::vector<Style> styles;
      for (int i = 0; i < n; ++i) styles.push_back(static_cast<Style>(i % 3));
      Environment env(cfg, styles, run_seed);

      Reference ref;
      ref.n = n;
      ref.cfg = cfg;
      ref.style = styles;
      for (int i = 0; i < n; ++i) {
        const auto& node = env.network().node(i);
        ref.f.push_back(node.features);
        ref.health.push_back(node.health);
        ref.clock.push_back(node.recovery_clock);
      }
      ref.genome.resize(n);
      ref.spent.assign(n, 0);
      ref.limit.assign(n, 0);
      ref.hist.assign(n, std::vector<std::vector<std::pair<int, double>>>(n));

      Rng noise_rng = make_stream(run_seed, Stream::ScoreNoise);
      Rng epi_rng = make_stream(run_seed, Stream::Epidemic);
      Rng act_rng = make_stream(run_seed, Stream::Exploration);
      std::uniform_int_distribution<int> capital(1, n - 1);
      for (int t = 0; t < ticks; ++t) {
        if (env.at_epoch_boundary()) {
          env.start_epoch();
          for (int i = 0; i < n; ++i) {
            const auto g = ignorant_act(act_rng);
            const int lim = capital(act_rng);
            env.apply_genome(i, g);
            env.network().node(i).capital_limit = lim;
            ref.genome[i] = g;
            ref.limit[i] = lim;
            ref.spent[i] = 0;
          }
        }
        const auto rec = env.run_tick();
        const auto want = ref.step(t, noise_rng, epi_rng);
        const auto& net = env.network();
        auto fail = [&](const std::string& what) {
          return CheckResult{false, "N=" + std::to_string(n) + " tick " + std::to_string(t) +
                                        ": " + what};
        };
        if (rec.interactions != want.interactions) return fail("interaction count");
        if (rec.bonds != want.bonds) return fail("bond count");
        if (rec.new_infections != want.infections) return fail("new infections");
        if (rec.reward_step != want.reward) return fail("reward");
        for (int i = 0; i < n; ++i) {
          if (env.last_benefit(i) != want.benefit[i]) return fail("node benefit");
          if (net.node(i).health != ref.health[i]) return fail("health");
          for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto& e = net.edge(i, j);
            if (e.interacted != (want.I[i][j] == 1)) return fail("interaction flag");
            if (e.intensity != want.wI[i][j]) return fail("intensity");
            if (e.bond_intensity != want.wB[i][j]) return fail("bond intensity");
          }
        }
        ++compared;
      }
    }
  }
  return {true, std::to_string(compared) + " ticks matched exactly"};
}

CheckResult trace_determinism(std::uint64_t seed) {
  SimConfig cfg;
  cfg.episode_days = 10;
  std::vector<Style> styles;
  for (int i = 0; i < cfg.num_nodes; ++i) styles.push_back(static_cast<Style>(i % 3));
  Rng init = make_stream(seed, Stream::Init);
  PolicySet policies;
  policies.cooperative = DenseNet({observation_size(PolicyKind::Cooperative, cfg.num_nodes), 16,
                                   kActionSize},
                                  Activation::Relu, Activation::Tanh);
  policies.cooperative->init_uniform(init);
  policies.egocentric = DenseNet({observation_size(PolicyKind::Egocentric, cfg.num_nodes), 16,
                                  kActionSize},
                                 Activation::Relu, Activation::Tanh);
  policies.egocentric->init_uniform(init);
  auto render = [&] {
    std::ostringstream out;
    write_trace_csv(out, run_episode(cfg, styles, policies, seed));
    return out.str();
  };
  const std::string a = render(), b = render();
  return {a == b && !a.empty(), std::to_string(a.size()) + " bytes per trace"};
}

}  // namespace dtcns::testing
