#include "morpho/genome.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "morpho/errors.hpp"

namespace morpho {
namespace {

using ordered_json = nlohmann::ordered_json;

int clamp_int(int v, int lo, int hi) { return std::clamp(v, lo, hi); }

// Uniform over {-k, ..., -1, 1, ..., k}. A delta of 0 would be a no-op
// mutation, so it is excluded from the range.
int nonzero_delta(int k, Rng& rng) {
  const int v = static_cast<int>(rng.uniform_int(-k, k - 1));
  return v >= 0 ? v + 1 : v;
}

// Largest kernel dimension present in the genome; grid mutations may not
// shrink the field below this.
int max_kernel_extent(const Genome& g) {
  int ext = 1;
  for (const auto& m : g.morphogens)
    ext = std::max({ext, static_cast<int>(m.diffusion_kernel.rows()),
                    static_cast<int>(m.diffusion_kernel.cols())});
  return ext;
}

// Scale down so the entry sum stays <= 1; entries keep their proportions.
void normalize_kernel(Kernel& k) {
  const double sum = k.sum();
  if (sum > 1.0) k /= sum;
}

Kernel random_kernel(int size, Rng& rng) {
  Kernel k(size, size);
  for (Eigen::Index r = 0; r < k.rows(); ++r)
    for (Eigen::Index c = 0; c < k.cols(); ++c) k(r, c) = rng.uniform();
  if (k.sum() <= 0.0) k((size - 1) / 2, (size - 1) / 2) = 1.0;
  normalize_kernel(k);
  return k;
}

std::vector<double> random_inhibition_row(int count, int self,
                                          const GenomeBounds& b, Rng& rng) {
  std::vector<double> row(count, 0.0);
  for (int n = 0; n < count; ++n) {
    if (n == self) continue;
    row[n] = rng.uniform(b.inhibition.lo, b.inhibition.hi);
  }
  return row;
}

MorphogenSpec random_morphogen(int count, int self, const GenomeBounds& b,
                               Rng& rng) {
  MorphogenSpec spec;
  spec.secretion_progenitor = rng.uniform(b.secretion.lo, b.secretion.hi);
  spec.secretion_neuron = rng.uniform(b.secretion.lo, b.secretion.hi);
  spec.diffusion_kernel = random_kernel(b.kernel_size, rng);
  spec.inhibition_row = random_inhibition_row(count, self, b, rng);
  return spec;
}

// Deterministic cleanup after variation: morphogen indices back in range,
// field large enough for every kernel, axon budget within the field.
void repair(Genome& g) {
  const int m = g.morphogen_count();
  const int last = std::max(0, m - 1);
  g.fates.division_morphogen = clamp_int(g.fates.division_morphogen, 0, last);
  g.fates.differentiation_morphogen =
      clamp_int(g.fates.differentiation_morphogen, 0, last);
  g.fates.axon_init_morphogen = clamp_int(g.fates.axon_init_morphogen, 0, last);
  g.axon.guidance_morphogen = clamp_int(g.axon.guidance_morphogen, 0, last);

  const int ext = max_kernel_extent(g);
  g.field_width = std::max(g.field_width, ext);
  g.field_height = std::max(g.field_height, ext);
  g.axon.max_length =
      clamp_int(g.axon.max_length, 1, g.field_width * g.field_height);
}

double canonical(double v) { return v == 0.0 ? 0.0 : v; }

void hash_mix(size_t& h, uint64_t v) {
  // FNV-1a over the 8 value bytes.
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffu;
    h *= 0x100000001b3ull;
  }
}

void hash_double(size_t& h, double v) {
  uint64_t bits;
  const double c = canonical(v);
  std::memcpy(&bits, &c, sizeof bits);
  hash_mix(h, bits);
}

}  // namespace

bool operator==(const MorphogenSpec& a, const MorphogenSpec& b) {
  return a.secretion_progenitor == b.secretion_progenitor &&
         a.secretion_neuron == b.secretion_neuron &&
         a.diffusion_kernel.rows() == b.diffusion_kernel.rows() &&
         a.diffusion_kernel.cols() == b.diffusion_kernel.cols() &&
         (a.diffusion_kernel == b.diffusion_kernel).all() &&
         a.inhibition_row == b.inhibition_row;
}

bool operator==(const FateRules& a, const FateRules& b) {
  return a.division_morphogen == b.division_morphogen &&
         a.division_threshold == b.division_threshold &&
         a.differentiation_morphogen == b.differentiation_morphogen &&
         a.differentiation_threshold == b.differentiation_threshold &&
         a.axon_init_morphogen == b.axon_init_morphogen &&
         a.axon_init_threshold == b.axon_init_threshold;
}

bool operator==(const AxonRules& a, const AxonRules& b) {
  return a.guidance_morphogen == b.guidance_morphogen &&
         a.connection_threshold == b.connection_threshold &&
         a.max_length == b.max_length;
}

bool operator==(const Genome& a, const Genome& b) {
  return a.field_width == b.field_width && a.field_height == b.field_height &&
         a.morphogens == b.morphogens && a.fates == b.fates &&
         a.axon == b.axon && a.growth_iterations == b.growth_iterations;
}

size_t GenomeHash::operator()(const Genome& g) const {
  size_t h = 0xcbf29ce484222325ull;
  hash_mix(h, static_cast<uint64_t>(g.field_width));
  hash_mix(h, static_cast<uint64_t>(g.field_height));
  hash_mix(h, static_cast<uint64_t>(g.morphogens.size()));
  for (const auto& m : g.morphogens) {
    hash_double(h, m.secretion_progenitor);
    hash_double(h, m.secretion_neuron);
    hash_mix(h, static_cast<uint64_t>(m.diffusion_kernel.rows()));
    hash_mix(h, static_cast<uint64_t>(m.diffusion_kernel.cols()));
    for (Eigen::Index r = 0; r < m.diffusion_kernel.rows(); ++r)
      for (Eigen::Index c = 0; c < m.diffusion_kernel.cols(); ++c)
        hash_double(h, m.diffusion_kernel(r, c));
    for (double v : m.inhibition_row) hash_double(h, v);
  }
  hash_mix(h, static_cast<uint64_t>(g.fates.division_morphogen));
  hash_double(h, g.fates.division_threshold);
  hash_mix(h, static_cast<uint64_t>(g.fates.differentiation_morphogen));
  hash_double(h, g.fates.differentiation_threshold);
  hash_mix(h, static_cast<uint64_t>(g.fates.axon_init_morphogen));
  hash_double(h, g.fates.axon_init_threshold);
  hash_mix(h, static_cast<uint64_t>(g.axon.guidance_morphogen));
  hash_double(h, g.axon.connection_threshold);
  hash_mix(h, static_cast<uint64_t>(g.axon.max_length));
  hash_mix(h, static_cast<uint64_t>(g.growth_iterations));
  return h;
}

std::optional<std::string> validity_error(const Genome& g) {
  if (g.field_width < 3 || g.field_height < 3)
    return "field must be at least 3x3";
  const int m = g.morphogen_count();
  if (m < 1 || m > 13) return "morphogen count must be in [1, 13]";
  if (g.growth_iterations < 1 || g.growth_iterations > 1000)
    return "growth_iterations must be in [1, 1000]";
  const int min_dim = std::min(g.field_width, g.field_height);
  for (int i = 0; i < m; ++i) {
    const auto& spec = g.morphogens[i];
    if (spec.secretion_progenitor < 0.0 || spec.secretion_neuron < 0.0)
      return "secretion rates must be non-negative";
    const auto& k = spec.diffusion_kernel;
    if (k.rows() < 1 || k.cols() < 1 || k.rows() % 2 == 0 || k.cols() % 2 == 0)
      return "kernel dimensions must be odd and positive";
    if (k.rows() > min_dim || k.cols() > min_dim)
      return "kernel must fit within the field";
    if ((k < 0.0).any()) return "kernel entries must be non-negative";
    const double sum = k.sum();
    if (!(sum > 0.0) || sum > 1.0 + 1e-9)
      return "kernel entry sum must be in (0, 1]";
    if (static_cast<int>(spec.inhibition_row.size()) != m)
      return "inhibition row length must equal morphogen count";
    for (int n = 0; n < m; ++n) {
      const double a = spec.inhibition_row[n];
      if (a < 0.0 || a > 1.0) return "inhibition coefficients must be in [0, 1]";
      if (n == i && a != 0.0) return "self-inhibition entry must be 0";
    }
  }
  const auto index_ok = [m](int i) { return i >= 0 && i < m; };
  if (!index_ok(g.fates.division_morphogen) ||
      !index_ok(g.fates.differentiation_morphogen) ||
      !index_ok(g.fates.axon_init_morphogen) ||
      !index_ok(g.axon.guidance_morphogen))
    return "morphogen index out of range";
  if (g.fates.division_threshold < 0.0 ||
      g.fates.differentiation_threshold < 0.0 ||
      g.fates.axon_init_threshold < 0.0 || g.axon.connection_threshold < 0.0)
    return "thresholds must be non-negative";
  if (g.axon.max_length < 1 ||
      g.axon.max_length > g.field_width * g.field_height)
    return "axon max_length must be in [1, field area]";
  return std::nullopt;
}

std::optional<std::string> bounds_error(const GenomeBounds& b) {
  const auto bad_int = [](const IntRange& r) { return r.lo > r.hi; };
  const auto bad_real = [](const RealRange& r) { return r.lo > r.hi; };
  if (bad_int(b.field_width) || bad_int(b.field_height) ||
      bad_int(b.morphogen_count) || bad_int(b.growth_iterations) ||
      bad_int(b.axon_max_length) || bad_int(b.field_limits) ||
      bad_int(b.iteration_limits) || bad_int(b.morphogen_limits))
    return "bounds range with min > max";
  if (bad_real(b.secretion) || bad_real(b.threshold) || bad_real(b.inhibition))
    return "bounds range with min > max";
  if (b.connection_threshold &&
      (bad_real(*b.connection_threshold) || b.connection_threshold->lo < 0.0))
    return "connection_threshold range must be non-negative with min <= max";
  if (b.kernel_size < 1 || b.kernel_size % 2 == 0)
    return "kernel_size must be odd and positive";
  if (b.field_limits.lo < 3 || b.field_limits.lo < b.kernel_size)
    return "field limits must allow at least 3x3 and the kernel size";
  if (b.field_width.lo < b.field_limits.lo || b.field_width.hi > b.field_limits.hi ||
      b.field_height.lo < b.field_limits.lo || b.field_height.hi > b.field_limits.hi)
    return "field init range must lie within field limits";
  if (b.morphogen_limits.lo < 1 || b.morphogen_limits.hi > 13)
    return "morphogen limits must lie within [1, 13]";
  if (b.morphogen_count.lo < b.morphogen_limits.lo ||
      b.morphogen_count.hi > b.morphogen_limits.hi)
    return "morphogen init range must lie within morphogen limits";
  if (b.iteration_limits.lo < 1 || b.iteration_limits.hi > 1000)
    return "iteration limits must lie within [1, 1000]";
  if (b.growth_iterations.lo < b.iteration_limits.lo ||
      b.growth_iterations.hi > b.iteration_limits.hi)
    return "iteration init range must lie within iteration limits";
  if (b.axon_max_length.lo < 1) return "axon_max_length must be positive";
  if (b.secretion.lo < 0.0) return "secretion range must be non-negative";
  if (b.threshold.lo < 0.0) return "threshold range must be non-negative";
  if (b.inhibition.lo < 0.0 || b.inhibition.hi > 1.0)
    return "inhibition range must lie within [0, 1]";
  if (b.int_param_delta < 1) return "int_param_delta must be at least 1";
  return std::nullopt;
}

void check_valid(const Genome& g) {
  if (auto err = validity_error(g)) throw ConfigError("invalid genome: " + *err);
}

void check_bounds(const GenomeBounds& b) {
  if (auto err = bounds_error(b)) throw ConfigError("invalid bounds: " + *err);
}

Genome random_genome(const GenomeBounds& bounds, Rng& rng) {
  check_bounds(bounds);
  Genome g;
  g.field_width =
      static_cast<int>(rng.uniform_int(bounds.field_width.lo, bounds.field_width.hi));
  g.field_height = static_cast<int>(
      rng.uniform_int(bounds.field_height.lo, bounds.field_height.hi));
  const int count = static_cast<int>(
      rng.uniform_int(bounds.morphogen_count.lo, bounds.morphogen_count.hi));
  g.growth_iterations = static_cast<int>(
      rng.uniform_int(bounds.growth_iterations.lo, bounds.growth_iterations.hi));
  g.morphogens.reserve(count);
  for (int i = 0; i < count; ++i)
    g.morphogens.push_back(random_morphogen(count, i, bounds, rng));
  g.fates.division_morphogen = static_cast<int>(rng.uniform_int(0, count - 1));
  g.fates.division_threshold = rng.uniform(bounds.threshold.lo, bounds.threshold.hi);
  g.fates.differentiation_morphogen =
      static_cast<int>(rng.uniform_int(0, count - 1));
  g.fates.differentiation_threshold =
      rng.uniform(bounds.threshold.lo, bounds.threshold.hi);
  g.fates.axon_init_morphogen = static_cast<int>(rng.uniform_int(0, count - 1));
  g.fates.axon_init_threshold =
      rng.uniform(bounds.threshold.lo, bounds.threshold.hi);
  g.axon.guidance_morphogen = static_cast<int>(rng.uniform_int(0, count - 1));
  const RealRange conn = bounds.connection_threshold_range();
  g.axon.connection_threshold = rng.uniform(conn.lo, conn.hi);
  g.axon.max_length = static_cast<int>(
      rng.uniform_int(bounds.axon_max_length.lo, bounds.axon_max_length.hi));
  repair(g);
  check_valid(g);
  return g;
}

Genome crossover(const Genome& a, const Genome& b, Rng& rng) {
  Genome child;
  const bool same_count = a.morphogen_count() == b.morphogen_count();
  if (!same_count) {
    // One parent donates its whole morphogen list, count included.
    const Genome& donor = rng.bernoulli(0.5) ? a : b;
    child.morphogens = donor.morphogens;
  }

  const auto pick = [&rng, &a, &b]() -> const Genome& {
    return rng.bernoulli(0.5) ? a : b;
  };
  child.field_width = pick().field_width;
  child.field_height = pick().field_height;
  child.growth_iterations = pick().growth_iterations;
  child.fates.division_morphogen = pick().fates.division_morphogen;
  child.fates.division_threshold = pick().fates.division_threshold;
  child.fates.differentiation_morphogen = pick().fates.differentiation_morphogen;
  child.fates.differentiation_threshold = pick().fates.differentiation_threshold;
  child.fates.axon_init_morphogen = pick().fates.axon_init_morphogen;
  child.fates.axon_init_threshold = pick().fates.axon_init_threshold;
  child.axon.guidance_morphogen = pick().axon.guidance_morphogen;
  child.axon.connection_threshold = pick().axon.connection_threshold;
  child.axon.max_length = pick().axon.max_length;

  if (same_count) {
    const int count = a.morphogen_count();
    child.morphogens.resize(count);
    for (int m = 0; m < count; ++m) {
      auto& spec = child.morphogens[m];
      spec.secretion_progenitor = pick().morphogens[m].secretion_progenitor;
      spec.secretion_neuron = pick().morphogens[m].secretion_neuron;
      spec.diffusion_kernel = pick().morphogens[m].diffusion_kernel;
      spec.inhibition_row = pick().morphogens[m].inhibition_row;
    }
  }

  repair(child);
  return child;
}

namespace {

void mutate_grid_size(Genome& g, const GenomeBounds& b, Rng& rng) {
  const int lo = std::max({3, b.field_limits.lo, max_kernel_extent(g)});
  g.field_width =
      clamp_int(g.field_width + nonzero_delta(3, rng), lo, b.field_limits.hi);
  g.field_height =
      clamp_int(g.field_height + nonzero_delta(3, rng), lo, b.field_limits.hi);
}

void mutate_growth_steps(Genome& g, const GenomeBounds& b, Rng& rng) {
  g.growth_iterations =
      clamp_int(g.growth_iterations + nonzero_delta(20, rng),
                b.iteration_limits.lo, b.iteration_limits.hi);
}

void mutate_parameter(Genome& g, const GenomeBounds& b, Rng& rng) {
  if (rng.uniform() < 0.9) {
    // Scale one float parameter. Enumeration order: secretion rates per
    // morphogen, then the four thresholds.
    const int count = g.morphogen_count();
    const int n_params = 2 * count + 4;
    const int idx = static_cast<int>(rng.uniform_int(0, n_params - 1));
    const double factor = rng.uniform(0.5, 2.0);
    if (idx < 2 * count) {
      auto& spec = g.morphogens[idx / 2];
      double& v = (idx % 2 == 0) ? spec.secretion_progenitor : spec.secretion_neuron;
      v *= factor;
    } else {
      switch (idx - 2 * count) {
        case 0: g.fates.division_threshold *= factor; break;
        case 1: g.fates.differentiation_threshold *= factor; break;
        case 2: g.fates.axon_init_threshold *= factor; break;
        default: g.axon.connection_threshold *= factor; break;
      }
    }
  } else {
    // Nudge one integer parameter: the axon budget or one of the four
    // morphogen role indices.
    const int idx = static_cast<int>(rng.uniform_int(0, 4));
    const int delta = rng.bernoulli(0.5) ? b.int_param_delta : -b.int_param_delta;
    const int last = g.morphogen_count() - 1;
    switch (idx) {
      case 0:
        g.axon.max_length = clamp_int(g.axon.max_length + delta, 1,
                                      g.field_width * g.field_height);
        break;
      case 1:
        g.fates.division_morphogen =
            clamp_int(g.fates.division_morphogen + delta, 0, last);
        break;
      case 2:
        g.fates.differentiation_morphogen =
            clamp_int(g.fates.differentiation_morphogen + delta, 0, last);
        break;
      case 3:
        g.fates.axon_init_morphogen =
            clamp_int(g.fates.axon_init_morphogen + delta, 0, last);
        break;
      default:
        g.axon.guidance_morphogen =
            clamp_int(g.axon.guidance_morphogen + delta, 0, last);
        break;
    }
  }
}

void resize_morphogens(Genome& g, int new_count, const GenomeBounds& b,
                       Rng& rng) {
  const int old_count = g.morphogen_count();
  if (new_count == old_count) return;
  if (new_count < old_count) {
    g.morphogens.resize(new_count);
    for (int m = 0; m < new_count; ++m)
      g.morphogens[m].inhibition_row.resize(new_count);
  } else {
    // Existing rows gain fresh coefficients for the new morphogens; the new
    // specs are drawn whole.
    for (int m = 0; m < old_count; ++m)
      for (int n = old_count; n < new_count; ++n)
        g.morphogens[m].inhibition_row.push_back(
            rng.uniform(b.inhibition.lo, b.inhibition.hi));
    for (int m = old_count; m < new_count; ++m)
      g.morphogens.push_back(random_morphogen(new_count, m, b, rng));
  }
}

void mutate_morphogen_count(Genome& g, const GenomeBounds& b, Rng& rng) {
  const int target = clamp_int(g.morphogen_count() + nonzero_delta(2, rng),
                               b.morphogen_limits.lo, b.morphogen_limits.hi);
  resize_morphogens(g, target, b, rng);
}

void mutate_matrix(Genome& g, Rng& rng) {
  const int count = g.morphogen_count();
  const bool pick_inhibition = count > 1 && rng.bernoulli(0.5);
  const double factor = rng.uniform(0.5, 2.0);
  if (pick_inhibition) {
    const int m = static_cast<int>(rng.uniform_int(0, count - 1));
    int n = static_cast<int>(rng.uniform_int(0, count - 2));
    if (n >= m) ++n;
    double& v = g.morphogens[m].inhibition_row[n];
    v = std::min(1.0, v * factor);
  } else {
    const int m = static_cast<int>(rng.uniform_int(0, count - 1));
    Kernel& k = g.morphogens[m].diffusion_kernel;
    const auto r = rng.uniform_int(0, k.rows() - 1);
    const auto c = rng.uniform_int(0, k.cols() - 1);
    k(r, c) *= factor;
    normalize_kernel(k);
  }
}

void mutate_radical(Genome& g, const GenomeBounds& b, Rng& rng) {
  const int count = static_cast<int>(
      rng.uniform_int(std::max(3, b.morphogen_limits.lo),
                      std::min(13, b.morphogen_limits.hi)));
  g.morphogens.clear();
  g.morphogens.reserve(count);
  for (int m = 0; m < count; ++m)
    g.morphogens.push_back(random_morphogen(count, m, b, rng));
  g.fates.division_morphogen = static_cast<int>(rng.uniform_int(0, count - 1));
  g.fates.differentiation_morphogen =
      static_cast<int>(rng.uniform_int(0, count - 1));
  g.fates.axon_init_morphogen = static_cast<int>(rng.uniform_int(0, count - 1));
  g.axon.guidance_morphogen = static_cast<int>(rng.uniform_int(0, count - 1));
  g.growth_iterations = static_cast<int>(
      rng.uniform_int(std::max(100, b.iteration_limits.lo),
                      std::min(1000, b.iteration_limits.hi)));
}

}  // namespace

Genome mutate(const Genome& g, const GenomeBounds& bounds, double multiplier,
              double base_rate, Rng& rng, const MutationConfig& cfg) {
  Genome out = g;
  const double p = std::min(1.0, base_rate * multiplier);
  if (rng.bernoulli(p)) {
    switch (rng.pick_weighted(cfg.type_probs)) {
      case 0: mutate_grid_size(out, bounds, rng); break;
      case 1: mutate_growth_steps(out, bounds, rng); break;
      case 2: mutate_parameter(out, bounds, rng); break;
      case 3: mutate_morphogen_count(out, bounds, rng); break;
      default: mutate_matrix(out, rng); break;
    }
  }
  if (rng.bernoulli(cfg.radical_prob)) mutate_radical(out, bounds, rng);
  repair(out);
  return out;
}

namespace {

ordered_json kernel_to_json(const Kernel& k) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < k.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < k.cols(); ++c) row.push_back(k(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Kernel kernel_from_json(const ordered_json& rows) {
  if (!rows.is_array() || rows.empty())
    throw ConfigError("genome json: kernel must be a non-empty array of rows");
  const size_t n_rows = rows.size();
  const size_t n_cols = rows.front().size();
  Kernel k(n_rows, n_cols);
  for (size_t r = 0; r < n_rows; ++r) {
    if (!rows[r].is_array() || rows[r].size() != n_cols)
      throw ConfigError("genome json: ragged kernel rows");
    for (size_t c = 0; c < n_cols; ++c) k(r, c) = rows[r][c].get<double>();
  }
  return k;
}

}  // namespace

std::string encode_genome(const Genome& g) {
  ordered_json j;
  j["schema"] = 1;
  j["field"] = {{"width", g.field_width}, {"height", g.field_height}};
  ordered_json specs = ordered_json::array();
  for (const auto& m : g.morphogens) {
    ordered_json s;
    s["sec_progenitor"] = m.secretion_progenitor;
    s["sec_neuron"] = m.secretion_neuron;
    s["kernel"] = kernel_to_json(m.diffusion_kernel);
    s["inhibition"] = m.inhibition_row;
    specs.push_back(std::move(s));
  }
  j["morphogens"] = std::move(specs);
  j["fates"] = {{"division_morphogen", g.fates.division_morphogen},
                {"division_threshold", g.fates.division_threshold},
                {"differentiation_morphogen", g.fates.differentiation_morphogen},
                {"differentiation_threshold", g.fates.differentiation_threshold},
                {"axon_init_morphogen", g.fates.axon_init_morphogen},
                {"axon_init_threshold", g.fates.axon_init_threshold}};
  j["axon"] = {{"guidance_morphogen", g.axon.guidance_morphogen},
               {"connection_threshold", g.axon.connection_threshold},
               {"max_length", g.axon.max_length}};
  j["iterations"] = g.growth_iterations;
  return j.dump(2);
}

Genome decode_genome(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("genome json: ") + e.what());
  }
  try {
    if (j.at("schema").get<int>() != 1)
      throw ConfigError("genome json: unsupported schema version");
    Genome g;
    g.field_width = j.at("field").at("width").get<int>();
    g.field_height = j.at("field").at("height").get<int>();
    for (const auto& s : j.at("morphogens")) {
      MorphogenSpec m;
      m.secretion_progenitor = s.at("sec_progenitor").get<double>();
      m.secretion_neuron = s.at("sec_neuron").get<double>();
      m.diffusion_kernel = kernel_from_json(s.at("kernel"));
      m.inhibition_row = s.at("inhibition").get<std::vector<double>>();
      g.morphogens.push_back(std::move(m));
    }
    const auto& f = j.at("fates");
    g.fates.division_morphogen = f.at("division_morphogen").get<int>();
    g.fates.division_threshold = f.at("division_threshold").get<double>();
    g.fates.differentiation_morphogen =
        f.at("differentiation_morphogen").get<int>();
    g.fates.differentiation_threshold =
        f.at("differentiation_threshold").get<double>();
    g.fates.axon_init_morphogen = f.at("axon_init_morphogen").get<int>();
    g.fates.axon_init_threshold = f.at("axon_init_threshold").get<double>();
    const auto& a = j.at("axon");
    g.axon.guidance_morphogen = a.at("guidance_morphogen").get<int>();
    g.axon.connection_threshold = a.at("connection_threshold").get<double>();
    g.axon.max_length = a.at("max_length").get<int>();
    g.growth_iterations = j.at("iterations").get<int>();
    check_valid(g);
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("genome json: ") + e.what());
  }
}

Genome load_genome_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open genome file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return decode_genome(buf.str());
}

void save_genome_file(const Genome& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write genome file: " + path);
  out << encode_genome(g) << '\n';
}

}  // namespace morpho
