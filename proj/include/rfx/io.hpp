#ifndef RFX_IO_HPP
#define RFX_IO_HPP

#include <string>
#include <vector>

#include "rfx/explore.hpp"
#include "rfx/instances.hpp"
#include "rfx/mdp.hpp"
#include "rfx/plan.hpp"
#include "rfx/rmax.hpp"

namespace rfx {

// File formats.  All numbers are written with enough digits to round-trip
// doubles exactly, so write-read-write is byte-stable.
//
//   MDP     {"S": int, "A": int, "H": int, "p1": [S], "P": [H][S][A][S]}
//   reward  {"r": [H][S][A]}
//   policy  {"pi": [H][S][A]}
//   dataset JSON Lines, one {"states": [H+1], "actions": [H]} per line
//
// Read failures (missing file, malformed JSON, wrong shapes) throw IoError.

TabularMdp read_mdp(const std::string& path);
void write_mdp(const TabularMdp& mdp, const std::string& path);

RewardTable read_reward(const std::string& path);
void write_reward(const RewardTable& reward, const std::string& path);

StochasticPolicy read_policy(const std::string& path);
void write_policy(const StochasticPolicy& pi, const std::string& path);

EpisodeDataset read_dataset(const std::string& path);
void write_dataset(const EpisodeDataset& data, const std::string& path);

// Cover file: policy tensors plus per-goal bookkeeping.
//   {"S":, "A":, "H":, "per_goal": [H*S], "policies": [[policy tensor]...]}
PolicyCover read_cover(const std::string& path);
void write_cover(const PolicyCover& cover, const std::string& path);

// Exploration record of the baseline: integer counts only (the estimates
// and known sets are reconstructed exactly on load).
//   {"S":, "A":, "H":, "m":, "snapshots": [{"episode":, "counts3": [...]}]}
std::vector<RmaxSnapshot> read_snapshots(const std::string& path);
void write_snapshots(std::span<const RmaxSnapshot> snapshots,
                     const std::string& path);

// Packing file: {"n":, "A":, "per_action":, "gamma":, "vectors": [A*M][2n]}.
PackingVectors read_packing(const std::string& path);
void write_packing(const PackingVectors& packing, const std::string& path);

}  // namespace rfx

#endif  // RFX_IO_HPP
