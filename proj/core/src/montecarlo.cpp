#include "hetnet/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/gamma_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <nlohmann/json.hpp>

#include "hetnet/specfun.hpp"

namespace hetnet::mc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double uniform(Rng& rng) { return boost::random::uniform_01<double>{}(rng); }

struct Link {
  std::size_t index = 0;
  double distance = kInf;
};

std::vector<double> distances(const std::vector<Point2>& points) {
  std::vector<double> d(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) d[k] = std::hypot(points[k].x, points[k].y);
  return d;
}

Link nearest(const std::vector<double>& d) {
  Link link;
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (d[k] < link.distance) link = {k, d[k]};
  }
  return link;
}

double average_power(const TierParams& t, double distance) {
  return t.n_antennas * t.intercept * t.tx_power * std::pow(distance, -t.pathloss_exp);
}

struct LinkQuality {
  double sinr = 0.0;
  double sir = 0.0;
};

// Serving BS at index `serving`, every other BS of the same tier interferes.
LinkQuality evaluate_link(Tier tier, const std::vector<double>& d, std::size_t serving, const Scenario& scn,
                          Rng& rng) {
  const auto& t = scn.tier(tier);
  const double scale = t.intercept * t.tx_power * t.n_antennas;
  const double signal =
      scale * scn.serving_gain() * sample_channel_power(tier, scn, rng) * std::pow(d[serving], -t.pathloss_exp);
  double interference = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (k == serving) continue;
    const double gain = tier == Tier::pico ? sample_interferer_gain(scn, rng) : 1.0;
    interference += gain * sample_channel_power(tier, scn, rng) * std::pow(d[k], -t.pathloss_exp);
  }
  interference *= scale;
  LinkQuality q;
  q.sir = interference > 0.0 ? signal / interference : kInf;
  q.sinr = signal / (scn.noise_power(tier) + interference);
  return q;
}

double shannon_rate(double bandwidth, double ratio) { return bandwidth * std::log2(1.0 + ratio); }

std::vector<Point2> sample_macro_window(const Scenario& scn, double radius, Rng& rng, std::int64_t& resampled) {
  const double density = scn.tier(Tier::macro).density;
  auto points = sample_ppp(density, radius, rng);
  while (density > 0.0 && points.empty()) {
    ++resampled;
    points = sample_ppp(density, radius, rng);
  }
  return points;
}

template <class T, class Fn>
std::vector<T> map_drops(std::int64_t n_drops, std::uint64_t seed, int threads, std::int64_t* resampled,
                         Fn&& per_drop) {
  if (n_drops < 1) throw std::domain_error("Monte Carlo: n_drops must be >= 1");
  std::vector<T> out(static_cast<std::size_t>(n_drops));
  const int workers = static_cast<int>(
      std::min<std::int64_t>(threads > 0 ? threads : default_thread_count(), n_drops));
  std::vector<std::int64_t> resample_counts(workers, 0);
  std::vector<std::exception_ptr> errors(workers);

  auto work = [&](int w) {
    const std::int64_t begin = n_drops * w / workers;
    const std::int64_t end = n_drops * (w + 1) / workers;
    try {
      for (std::int64_t i = begin; i < end; ++i) {
        Rng rng = drop_stream(seed, static_cast<std::uint64_t>(i));
        out[static_cast<std::size_t>(i)] = per_drop(rng, resample_counts[w]);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  if (resampled) {
    for (auto c : resample_counts) *resampled += c;
  }
  return out;
}

double pairwise_sum(const double* first, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += first[k];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(first, half) + pairwise_sum(first + half, n - half);
}

std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::association: return "association";
    case Mode::server: return "server";
    case Mode::blocked: return "blocked";
  }
  return "unknown";
}

}  // namespace

Rng drop_stream(std::uint64_t seed, std::uint64_t drop_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(drop_index), static_cast<std::uint32_t>(drop_index >> 32)};
  return Rng(seq);
}

int default_thread_count() {
  if (const char* env = std::getenv("HETNET_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<Point2> sample_ppp(double density, double radius, Rng& rng) {
  if (!(density >= 0.0)) throw std::domain_error("sample_ppp: density must be >= 0");
  if (!(radius > 0.0)) throw std::domain_error("sample_ppp: radius must be > 0");
  const double mean = density * kPi * radius * radius;
  if (mean == 0.0) return {};
  const long count = boost::random::poisson_distribution<long, double>{mean}(rng);
  std::vector<Point2> points;
  points.reserve(static_cast<std::size_t>(count));
  for (long k = 0; k < count; ++k) {
    const double rho = radius * std::sqrt(uniform(rng));
    const double theta = 2.0 * kPi * uniform(rng);
    points.push_back({rho * std::cos(theta), rho * std::sin(theta)});
  }
  return points;
}

double sample_channel_power(Tier tier, const Scenario& scn, Rng& rng) {
  if (tier == Tier::macro) return boost::random::exponential_distribution<double>{1.0}(rng);
  const double shape = scn.tier(Tier::pico).nakagami_order;
  return boost::random::gamma_distribution<double>{shape, 1.0 / shape}(rng);
}

double sample_interferer_gain(const Scenario& scn, Rng& rng) {
  const double half_width = scn.antenna_spacing_ratio();
  const double omega = half_width * (2.0 * uniform(rng) - 1.0);
  return specfun::array_gain(omega, scn.tier(Tier::pico).n_antennas);
}

double macro_window_radius(const Scenario& scn, const SimOptions& options) {
  const double density = scn.tier(Tier::macro).density;
  if (density == 0.0) return scn.blockage().los_radius;
  return options.window_factor / std::sqrt(kPi * density);
}

DropOutcome simulate_drop(const Scenario& scn, double r_th, Rng& rng, const SimOptions& options,
                          std::int64_t* resampled) {
  std::int64_t local_resampled = 0;
  DropOutcome out;
  out.requested_rank = scn.popularity().rank_for_quantile(uniform(rng));

  const auto macro_points = sample_macro_window(scn, macro_window_radius(scn, options), rng, local_resampled);
  const auto pico_points = sample_ppp(scn.tier(Tier::pico).density, scn.blockage().los_radius, rng);
  if (resampled) *resampled += local_resampled;

  const std::array<std::vector<double>, 2> d{distances(macro_points), distances(pico_points)};
  const std::array<Link, 2> closest{nearest(d[0]), nearest(d[1])};
  std::array<double, 2> power{0.0, 0.0};
  for (Tier t : {Tier::macro, Tier::pico}) {
    const auto& link = closest[tier_index(t)];
    if (std::isfinite(link.distance)) power[tier_index(t)] = average_power(scn.tier(t), link.distance);
  }

  auto max_rp = [&](bool macro_ok, bool pico_ok) -> std::optional<Tier> {
    macro_ok = macro_ok && !d[0].empty();
    pico_ok = pico_ok && !d[1].empty();
    if (pico_ok && (!macro_ok || power[1] >= power[0])) return Tier::pico;
    if (macro_ok) return Tier::macro;
    return std::nullopt;
  };

  out.maxrp_tier = max_rp(true, true).value_or(Tier::macro);
  const int f = out.requested_rank;
  const auto serving = max_rp(placement_prob(Tier::macro, f, scn.cache()) == 1,
                              placement_prob(Tier::pico, f, scn.cache()) == 1);

  if (serving) {
    const Tier t = *serving;
    const auto& link = closest[tier_index(t)];
    const auto q = evaluate_link(t, d[tier_index(t)], link.index, scn, rng);
    const double bandwidth = scn.tier(t).bandwidth;
    out.serving_tier = t;
    out.serving_distance = link.distance;
    out.mode = Mode::association;
    out.sinr = q.sinr;
    out.sir = q.sir;
    out.rate = shannon_rate(bandwidth, q.sinr);
    out.success = out.rate > r_th;
    out.success_sir = shannon_rate(bandwidth, q.sir) > r_th;
    return out;
  }

  // Server mode: the nearest macro BS relays the file over the backhaul.
  out.serving_tier = Tier::macro;
  out.serving_distance = closest[0].distance;
  if (d[0].empty()) {
    out.mode = Mode::blocked;
    return out;
  }
  const auto q = evaluate_link(Tier::macro, d[0], closest[0].index, scn, rng);
  out.sinr = q.sinr;
  out.sir = q.sir;
  if (r_th > scn.cache().backhaul_capacity) {
    out.mode = Mode::blocked;
    return out;
  }
  out.mode = Mode::server;
  out.rate = shannon_rate(scn.tier(Tier::macro).bandwidth, q.sir);
  out.success = out.rate > r_th;
  out.success_sir = out.success;
  return out;
}

std::vector<DropOutcome> run_drops(const Scenario& scn, double r_th, std::int64_t n_drops, std::uint64_t seed,
                                   const SimOptions& options, std::int64_t* resampled) {
  return map_drops<DropOutcome>(n_drops, seed, options.threads, resampled,
                                [&](Rng& rng, std::int64_t& count) {
                                  return simulate_drop(scn, r_th, rng, options, &count);
                                });
}

McEstimate summarize(const std::vector<double>& values, std::uint64_t seed) {
  McEstimate e;
  e.n_drops = static_cast<std::int64_t>(values.size());
  e.seed = seed;
  if (values.empty()) return e;
  const double n = static_cast<double>(values.size());
  e.mean = pairwise_sum(values.data(), values.size()) / n;
  if (values.size() > 1) {
    std::vector<double> sq(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) sq[k] = (values[k] - e.mean) * (values[k] - e.mean);
    const double variance = pairwise_sum(sq.data(), sq.size()) / (n - 1.0);
    e.half_width_95 = 1.96 * std::sqrt(variance / n);
  }
  return e;
}

namespace {

template <class Fn>
McEstimate estimate_from_drops(const Scenario& scn, double r_th, std::int64_t n_drops, std::uint64_t seed,
                               const SimOptions& options, Fn&& value_of) {
  std::int64_t resampled = 0;
  const auto drops = run_drops(scn, r_th, n_drops, seed, options, &resampled);
  std::vector<double> values(drops.size());
  for (std::size_t k = 0; k < drops.size(); ++k) values[k] = value_of(drops[k]);
  auto e = summarize(values, seed);
  e.resampled_windows = resampled;
  return e;
}

}  // namespace

McEstimate estimate_success(const Scenario& scn, double r_th, std::int64_t n_drops, std::uint64_t seed,
                            const SimOptions& options) {
  return estimate_from_drops(scn, r_th, n_drops, seed, options,
                             [](const DropOutcome& d) { return d.success ? 1.0 : 0.0; });
}

McEstimate estimate_ase(const Scenario& scn, double r_th, std::int64_t n_drops, std::uint64_t seed,
                        const SimOptions& options) {
  return estimate_from_drops(scn, r_th, n_drops, seed, options, [&](const DropOutcome& d) {
    if (!d.success) return 0.0;
    const auto& t = scn.tier(d.mode == Mode::server ? Tier::macro : d.serving_tier);
    return t.density * r_th / t.bandwidth;
  });
}

GapEstimate estimate_sir_sinr_gap(const Scenario& scn, double r_th, std::int64_t n_drops, std::uint64_t seed,
                                  const SimOptions& options) {
  std::int64_t resampled = 0;
  const auto drops = run_drops(scn, r_th, n_drops, seed, options, &resampled);
  std::vector<double> with(drops.size());
  std::vector<double> without(drops.size());
  for (std::size_t k = 0; k < drops.size(); ++k) {
    with[k] = drops[k].success ? 1.0 : 0.0;
    without[k] = drops[k].success_sir ? 1.0 : 0.0;
  }
  GapEstimate g{summarize(with, seed), summarize(without, seed)};
  g.with_noise.resampled_windows = g.without_noise.resampled_windows = resampled;
  return g;
}

McEstimate estimate_association(const Scenario& scn, Tier tier, std::int64_t n_drops, std::uint64_t seed,
                                const SimOptions& options) {
  return estimate_from_drops(scn, 0.0, n_drops, seed, options,
                             [&](const DropOutcome& d) { return d.maxrp_tier == tier ? 1.0 : 0.0; });
}

McEstimate estimate_nocache_coverage(const Scenario& scn, double tau, std::int64_t n_drops, std::uint64_t seed,
                                     const SimOptions& options) {
  if (scn.tier(Tier::macro).density == 0.0) {
    throw std::domain_error("estimate_nocache_coverage: macro density must be positive");
  }
  std::int64_t resampled = 0;
  const double radius = macro_window_radius(scn, options);
  const auto values = map_drops<double>(n_drops, seed, options.threads, &resampled,
                                        [&](Rng& rng, std::int64_t& count) {
                                          const auto points = sample_macro_window(scn, radius, rng, count);
                                          const auto d = distances(points);
                                          const auto q = evaluate_link(Tier::macro, d, nearest(d).index, scn, rng);
                                          return q.sir > tau ? 1.0 : 0.0;
                                        });
  auto e = summarize(values, seed);
  e.resampled_windows = resampled;
  return e;
}

void write_drop_trace(std::ostream& out, const std::vector<DropOutcome>& drops) {
  for (std::size_t k = 0; k < drops.size(); ++k) {
    const auto& d = drops[k];
    nlohmann::json rec{{"drop", k},
                       {"rank", d.requested_rank},
                       {"tier", tier_number(d.serving_tier)},
                       {"distance", d.serving_distance},
                       {"mode", mode_name(d.mode)},
                       {"sinr", d.sinr},
                       {"sir", d.sir},
                       {"rate", d.rate},
                       {"success", d.success},
                       {"success_sir", d.success_sir},
                       {"maxrp_tier", tier_number(d.maxrp_tier)}};
    out << rec.dump() << '\n';
  }
}

}  // namespace hetnet::mc
