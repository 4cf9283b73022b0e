#include "rfx/io.hpp"

#include <array>
#include <fstream>

#include <json.hpp>

#include "rfx/errors.hpp"

namespace rfx {

namespace {

using ojson = nlohmann::ordered_json;

ojson parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path + " for reading");
  try {
    return ojson::parse(in);
  } catch (const std::exception& e) {
    throw IoError("cannot parse " + path + ": " + e.what());
  }
}

void dump_file(const ojson& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << j.dump() << '\n';
  if (!out) throw IoError("write to " + path + " failed");
}

int get_dim(const ojson& j, const char* key, const std::string& path) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    throw IoError(path + ": missing integer field \"" + key + "\"");
  }
  int v = j[key].get<int>();
  if (v < 1) throw IoError(path + ": field \"" + key + "\" must be positive");
  return v;
}

// Reads a nested array with the given dimensions into a flat vector.
void flatten_into(const ojson& node, std::span<const int> dims,
                  std::vector<double>& out, const std::string& path) {
  if (dims.empty()) {
    if (!node.is_number()) throw IoError(path + ": expected a number");
    out.push_back(node.get<double>());
    return;
  }
  if (!node.is_array() ||
      node.size() != static_cast<std::size_t>(dims.front())) {
    throw IoError(path + ": expected an array of length " +
                  std::to_string(dims.front()));
  }
  for (const auto& child : node) {
    flatten_into(child, dims.subspan(1), out, path);
  }
}

std::vector<double> read_tensor(const ojson& j, const char* key,
                                std::span<const int> dims,
                                const std::string& path) {
  if (!j.contains(key)) {
    throw IoError(path + ": missing field \"" + std::string(key) + "\"");
  }
  std::vector<double> out;
  std::size_t total = 1;
  for (int d : dims) total *= static_cast<std::size_t>(d);
  out.reserve(total);
  flatten_into(j[key], dims, out, path);
  return out;
}

// Builds the nested array for a flat tensor.
ojson nest(std::span<const double> flat, std::span<const int> dims) {
  if (dims.size() == 1) {
    ojson arr = ojson::array();
    for (int i = 0; i < dims.front(); ++i) arr.push_back(flat[i]);
    return arr;
  }
  std::size_t stride = 1;
  for (std::size_t d = 1; d < dims.size(); ++d) {
    stride *= static_cast<std::size_t>(dims[d]);
  }
  ojson arr = ojson::array();
  for (int i = 0; i < dims.front(); ++i) {
    arr.push_back(nest(flat.subspan(i * stride, stride), dims.subspan(1)));
  }
  return arr;
}

}  // namespace

TabularMdp read_mdp(const std::string& path) {
  ojson j = parse_file(path);
  int S = get_dim(j, "S", path);
  int A = get_dim(j, "A", path);
  int H = get_dim(j, "H", path);
  std::vector<double> p1 = read_tensor(j, "p1", std::array{S}, path);
  std::vector<double> P = read_tensor(j, "P", std::array{H, S, A, S}, path);
  try {
    return {S, A, H, std::move(P), std::move(p1)};
  } catch (const std::exception& e) {
    throw IoError(path + ": " + e.what());
  }
}

void write_mdp(const TabularMdp& mdp, const std::string& path) {
  const int S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
  ojson j;
  j["S"] = S;
  j["A"] = A;
  j["H"] = H;
  j["p1"] = nest(mdp.initial_dist(), std::array{S});
  j["P"] = nest(mdp.transitions_flat(), std::array{H, S, A, S});
  dump_file(j, path);
}

RewardTable read_reward(const std::string& path) {
  ojson j = parse_file(path);
  if (!j.contains("r") || !j["r"].is_array() || j["r"].empty() ||
      !j["r"][0].is_array() || j["r"][0].empty() || !j["r"][0][0].is_array() ||
      j["r"][0][0].empty()) {
    throw IoError(path + ": reward file needs a nonempty [H][S][A] field \"r\"");
  }
  int H = static_cast<int>(j["r"].size());
  int S = static_cast<int>(j["r"][0].size());
  int A = static_cast<int>(j["r"][0][0].size());
  std::vector<double> r = read_tensor(j, "r", std::array{H, S, A}, path);
  try {
    return {S, A, H, std::move(r)};
  } catch (const std::exception& e) {
    throw IoError(path + ": " + e.what());
  }
}

void write_reward(const RewardTable& reward, const std::string& path) {
  ojson j;
  j["r"] = nest(reward.rewards_flat(),
                std::array{reward.horizon(), reward.num_states(),
                           reward.num_actions()});
  dump_file(j, path);
}

StochasticPolicy read_policy(const std::string& path) {
  ojson j = parse_file(path);
  if (!j.contains("pi") || !j["pi"].is_array() || j["pi"].empty() ||
      !j["pi"][0].is_array() || j["pi"][0].empty() ||
      !j["pi"][0][0].is_array() || j["pi"][0][0].empty()) {
    throw IoError(path + ": policy file needs a nonempty [H][S][A] field \"pi\"");
  }
  int H = static_cast<int>(j["pi"].size());
  int S = static_cast<int>(j["pi"][0].size());
  int A = static_cast<int>(j["pi"][0][0].size());
  std::vector<double> pi = read_tensor(j, "pi", std::array{H, S, A}, path);
  try {
    return {S, A, H, std::move(pi)};
  } catch (const std::exception& e) {
    throw IoError(path + ": " + e.what());
  }
}

void write_policy(const StochasticPolicy& pi, const std::string& path) {
  ojson j;
  j["pi"] = nest(pi.probs_flat(),
                 std::array{pi.horizon(), pi.num_states(), pi.num_actions()});
  dump_file(j, path);
}

EpisodeDataset read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path + " for reading");
  EpisodeDataset data;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    ojson j;
    try {
      j = ojson::parse(line);
    } catch (const std::exception& e) {
      throw IoError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!j.contains("states") || !j["states"].is_array() ||
        !j.contains("actions") || !j["actions"].is_array()) {
      throw IoError(path + ":" + std::to_string(lineno) +
                    ": need \"states\" and \"actions\" arrays");
    }
    Trajectory traj;
    for (const auto& v : j["states"]) traj.states.push_back(v.get<int>());
    for (const auto& v : j["actions"]) traj.actions.push_back(v.get<int>());
    if (traj.states.size() != traj.actions.size() + 1 || traj.actions.empty()) {
      throw IoError(path + ":" + std::to_string(lineno) +
                    ": episode needs H actions and H+1 states");
    }
    int H = static_cast<int>(traj.actions.size());
    if (data.episodes.empty()) {
      data.horizon = H;
    } else if (H != data.horizon) {
      throw IoError(path + ":" + std::to_string(lineno) +
                    ": episode horizon differs from the first line");
    }
    data.episodes.push_back(std::move(traj));
  }
  return data;
}

void write_dataset(const EpisodeDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (const Trajectory& traj : data.episodes) {
    ojson j;
    j["states"] = traj.states;
    j["actions"] = traj.actions;
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("write to " + path + " failed");
}

PolicyCover read_cover(const std::string& path) {
  ojson j = parse_file(path);
  PolicyCover cover;
  cover.num_states = get_dim(j, "S", path);
  cover.num_actions = get_dim(j, "A", path);
  cover.horizon = get_dim(j, "H", path);
  if (!j.contains("per_goal") || !j["per_goal"].is_array() ||
      j["per_goal"].size() !=
          static_cast<std::size_t>(cover.horizon) * cover.num_states) {
    throw IoError(path + ": \"per_goal\" must have H*S entries");
  }
  for (const auto& v : j["per_goal"]) cover.per_goal.push_back(v.get<int>());
  if (!j.contains("policies") || !j["policies"].is_array()) {
    throw IoError(path + ": missing \"policies\" array");
  }
  std::array dims{cover.horizon, cover.num_states, cover.num_actions};
  for (const auto& node : j["policies"]) {
    std::vector<double> flat;
    flatten_into(node, dims, flat, path);
    cover.policies.emplace_back(cover.num_states, cover.num_actions,
                                cover.horizon, std::move(flat));
  }
  return cover;
}

void write_cover(const PolicyCover& cover, const std::string& path) {
  ojson j;
  j["S"] = cover.num_states;
  j["A"] = cover.num_actions;
  j["H"] = cover.horizon;
  j["per_goal"] = cover.per_goal;
  ojson arr = ojson::array();
  std::array dims{cover.horizon, cover.num_states, cover.num_actions};
  for (const StochasticPolicy& pi : cover.policies) {
    arr.push_back(nest(pi.probs_flat(), dims));
  }
  j["policies"] = std::move(arr);
  dump_file(j, path);
}

std::vector<RmaxSnapshot> read_snapshots(const std::string& path) {
  ojson j = parse_file(path);
  int S = get_dim(j, "S", path);
  int A = get_dim(j, "A", path);
  int H = get_dim(j, "H", path);
  int m = get_dim(j, "m", path);
  if (!j.contains("snapshots") || !j["snapshots"].is_array()) {
    throw IoError(path + ": missing \"snapshots\" array");
  }
  std::vector<RmaxSnapshot> out;
  const std::size_t cells = static_cast<std::size_t>(H) * S * A * S;
  for (const auto& node : j["snapshots"]) {
    RmaxSnapshot snap;
    snap.episode = node.value("episode", 0);
    if (!node.contains("counts3") || !node["counts3"].is_array() ||
        node["counts3"].size() != cells) {
      throw IoError(path + ": snapshot counts must have H*S*A*S entries");
    }
    EmpiricalModel& model = snap.model;
    model.num_states = S;
    model.num_actions = A;
    model.horizon = H;
    model.counts3.reserve(cells);
    for (const auto& v : node["counts3"]) {
      model.counts3.push_back(v.get<std::int64_t>());
    }
    model.counts2.assign(static_cast<std::size_t>(H) * S * A, 0);
    for (std::size_t i = 0; i < model.counts2.size(); ++i) {
      for (int s2 = 0; s2 < S; ++s2) {
        model.counts2[i] += model.counts3[i * S + s2];
      }
    }
    // Rebuild the derived pieces exactly from the integer counts.
    model.p_hat.assign(cells, 0.0);
    for (std::size_t i = 0; i < model.counts2.size(); ++i) {
      if (model.counts2[i] == 0) {
        int s = static_cast<int>((i / A) % S);
        model.p_hat[i * S + s] = 1.0;
        continue;
      }
      double inv = 1.0 / static_cast<double>(model.counts2[i]);
      for (int s2 = 0; s2 < S; ++s2) {
        model.p_hat[i * S + s2] =
            static_cast<double>(model.counts3[i * S + s2]) * inv;
      }
    }
    snap.known.num_states = S;
    snap.known.horizon = H;
    snap.known.m = m;
    snap.known.known.assign(static_cast<std::size_t>(H) * S, 0);
    for (int h = 0; h < H; ++h) {
      for (int s = 0; s < S; ++s) {
        bool all = true;
        for (int a = 0; a < A; ++a) {
          if (model.count(h, s, a) < m) {
            all = false;
            break;
          }
        }
        snap.known.known[static_cast<std::size_t>(h) * S + s] = all ? 1 : 0;
      }
    }
    out.push_back(std::move(snap));
  }
  return out;
}

void write_snapshots(std::span<const RmaxSnapshot> snapshots,
                     const std::string& path) {
  if (snapshots.empty()) throw IoError("refusing to write an empty snapshot file");
  const EmpiricalModel& first = snapshots.front().model;
  ojson j;
  j["S"] = first.num_states;
  j["A"] = first.num_actions;
  j["H"] = first.horizon;
  j["m"] = snapshots.front().known.m;
  ojson arr = ojson::array();
  for (const RmaxSnapshot& snap : snapshots) {
    ojson node;
    node["episode"] = snap.episode;
    node["counts3"] = snap.model.counts3;
    arr.push_back(std::move(node));
  }
  j["snapshots"] = std::move(arr);
  dump_file(j, path);
}

PackingVectors read_packing(const std::string& path) {
  ojson j = parse_file(path);
  PackingVectors packing;
  packing.n = get_dim(j, "n", path);
  packing.num_actions = get_dim(j, "A", path);
  packing.per_action = get_dim(j, "per_action", path);
  if (!j.contains("gamma") || !j["gamma"].is_number()) {
    throw IoError(path + ": missing \"gamma\"");
  }
  packing.gamma = j["gamma"].get<double>();
  std::size_t total =
      static_cast<std::size_t>(packing.num_actions) * packing.per_action;
  std::size_t len = 2 * static_cast<std::size_t>(packing.n);
  if (!j.contains("vectors") || !j["vectors"].is_array() ||
      j["vectors"].size() != total) {
    throw IoError(path + ": \"vectors\" must have A*per_action rows");
  }
  packing.v.reserve(total * len);
  for (const auto& row : j["vectors"]) {
    if (!row.is_array() || row.size() != len) {
      throw IoError(path + ": each vector must have 2n entries");
    }
    for (const auto& v : row) {
      int cell = v.get<int>();
      if (cell != 1 && cell != -1) {
        throw IoError(path + ": vector entries must be +1 or -1");
      }
      packing.v.push_back(static_cast<std::int8_t>(cell));
    }
  }
  return packing;
}

void write_packing(const PackingVectors& packing, const std::string& path) {
  ojson j;
  j["n"] = packing.n;
  j["A"] = packing.num_actions;
  j["per_action"] = packing.per_action;
  j["gamma"] = packing.gamma;
  ojson arr = ojson::array();
  for (int a = 0; a < packing.num_actions; ++a) {
    for (int p = 0; p < packing.per_action; ++p) {
      auto vec = packing.vec(a, p);
      ojson row = ojson::array();
      for (std::int8_t cell : vec) row.push_back(static_cast<int>(cell));
      arr.push_back(std::move(row));
    }
  }
  j["vectors"] = std::move(arr);
  dump_file(j, path);
}

}  // namespace rfx
