#include "shiftbc/config.hpp"

namespace shiftbc {

using nlohmann::json;

json config_to_json(const ExperimentConfig& c) {
  json model{{"kind", c.model_kind}};
  if (c.model_kind == "iid-finite") model["probabilities"] = c.probabilities;
  if (c.model_kind == "iid-geometric") model["p"] = c.geometric_p;
  if (c.model_kind == "markov") model["transition"] = c.transition;

  json schedule{{"kind", c.schedule_kind}};
  if (c.schedule_kind == "fixed-cylinder") {
    schedule["interval"] = {c.cylinder_l, c.cylinder_r};
    schedule["symbols"] = c.cylinder_symbols;
  } else {
    schedule["beta"] = c.beta;
  }
  schedule["target_halfwidth"] = c.target_halfwidth;

  return json{{"model", model},
              {"family", c.family},
              {"schedule", schedule},
              {"setup", c.setup},
              {"event_symbol", c.event_symbol},
              {"N", c.n_max},
              {"radii", c.radii},
              {"cap", c.cap},
              {"smb_radius", c.smb_radius},
              {"replicates", c.replicates},
              {"seed", c.seed},
              {"sidedness", c.sidedness},
              {"gamma", c.gamma},
              {"epsilon", c.epsilon},
              {"envelope_C", c.envelope_c},
              {"k_max", c.k_max},
              {"oracle_max_len", c.oracle_max_len},
              {"exec", c.exec},
              {"out", c.out_dir},
              {"format", c.format},
              {"max_resident", c.max_resident}};
}

namespace {

template <class T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  if (j.contains("model")) {
    const auto& m = j.at("model");
    read_if(m, "kind", c.model_kind);
    read_if(m, "probabilities", c.probabilities);
    read_if(m, "p", c.geometric_p);
    read_if(m, "transition", c.transition);
  }
  read_if(j, "family", c.family);
  if (j.contains("schedule")) {
    const auto& s = j.at("schedule");
    read_if(s, "kind", c.schedule_kind);
    if (s.contains("interval")) {
      const auto iv = s.at("interval").get<std::vector<long long>>();
      if (iv.size() != 2) raise(ErrKind::argument, "schedule interval needs [l, r]");
      c.cylinder_l = iv[0];
      c.cylinder_r = iv[1];
    }
    read_if(s, "symbols", c.cylinder_symbols);
    read_if(s, "beta", c.beta);
    read_if(s, "target_halfwidth", c.target_halfwidth);
  }
  read_if(j, "setup", c.setup);
  read_if(j, "event_symbol", c.event_symbol);
  read_if(j, "N", c.n_max);
  read_if(j, "radii", c.radii);
  read_if(j, "cap", c.cap);
  read_if(j, "smb_radius", c.smb_radius);
  read_if(j, "replicates", c.replicates);
  read_if(j, "seed", c.seed);
  read_if(j, "sidedness", c.sidedness);
  read_if(j, "gamma", c.gamma);
  read_if(j, "epsilon", c.epsilon);
  read_if(j, "envelope_C", c.envelope_c);
  read_if(j, "k_max", c.k_max);
  read_if(j, "oracle_max_len", c.oracle_max_len);
  read_if(j, "exec", c.exec);
  read_if(j, "out", c.out_dir);
  read_if(j, "format", c.format);
  read_if(j, "max_resident", c.max_resident);
  return c;
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string dump = config_to_json(cfg).dump();
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ProcessModel model_from_config(const ExperimentConfig& cfg) {
  if (cfg.model_kind == "iid-finite") return ProcessModel::iid_finite(cfg.probabilities);
  if (cfg.model_kind == "iid-geometric") return ProcessModel::iid_geometric(cfg.geometric_p);
  if (cfg.model_kind == "markov") return ProcessModel::markov(cfg.transition);
  if (cfg.model_kind == "gauss-digits") return ProcessModel::gauss_digits();
  raise(ErrKind::argument, "unknown model kind '" + cfg.model_kind + "'");
}

IndexFamily family_from_config(const ExperimentConfig& cfg) {
  std::vector<Polynomial> polys;
  polys.reserve(cfg.family.size());
  for (const auto& coeffs : cfg.family) polys.emplace_back(coeffs);
  return IndexFamily(std::move(polys));
}

Sidedness sidedness_from_config(const ExperimentConfig& cfg) {
  if (cfg.sidedness == "two-sided") return Sidedness::two_sided;
  if (cfg.sidedness == "one-sided") return Sidedness::one_sided;
  raise(ErrKind::argument, "sidedness must be 'two-sided' or 'one-sided'");
}

}  // namespace shiftbc
