#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "flatscan/diffgeo/distribution.hpp"
#include "flatscan/system/system.hpp"

namespace flatscan::algorithms {

using diffgeo::Codistribution;
using diffgeo::Distribution;
using diffgeo::RankOracle;
using diffgeo::VectorField;
using symexpr::RatFunc;
using system::ControlAffineSystem;

enum class Rule { A, B, Ci, Cii, D };
const char* rule_name(Rule r);

// Solutions alpha = (alpha1, alpha2) of the quadratic membership condition.
struct Lemma1Result {
  VectorField v1, v2;
  // q_k(alpha) = a_k alpha1^2 + b_k alpha1 alpha2 + c_k alpha2^2, one k per
  // annihilating covector of D2
  std::vector<RatFunc> a, b, c;
  std::vector<std::array<RatFunc, 2>> alphas;
  std::vector<VectorField> candidates;  // alpha1 v1 + alpha2 v2, made primitive
  bool degenerate = false;              // every alpha solves the condition
};

Lemma1Result lemma1_candidates(const VectorField& f, const Distribution& d0, const Distribution& d1,
                               const Distribution& d2, const VectorField& v1, const VectorField& v2,
                               const RankOracle& oracle);

// Name of the first failed assumption, or nullopt when all hold.
std::optional<std::string> lemma1_violation(const VectorField& f, const Distribution& d0, const Distribution& d1,
                                            const Distribution& d2, const RankOracle& oracle);

struct StepRecord {
  std::size_t index = 0;  // transition D_i -> D_{i+1}
  Rule rule = Rule::A;
  Distribution input;   // effective D_i (after any replacement)
  Distribution output;  // effective D_{i+1}
  std::size_t corank = 0;
  bool involutive = false;                 // of D_i before replacement
  std::optional<Distribution> cauchy;      // C(D_i) for non-involutive D_i
  std::optional<Distribution> replaced;    // D_i before a C-i replacement
  std::optional<Lemma1Result> lemma;       // C steps
  std::optional<std::size_t> chosen;       // index into lemma->candidates
  std::string note;                        // why C was not applicable, etc.
};

enum class LeafStatus { ReachedTangent, Stalled, DepthCapped };
const char* status_name(LeafStatus s);

struct Branch {
  std::string path;  // branch choices, e.g. "1.2"; empty for the trunk
  std::vector<StepRecord> steps;
  LeafStatus status = LeafStatus::ReachedTangent;
  std::vector<Distribution> sequence;  // effective D_1, ..., D_s
};

struct BranchTree {
  int algorithm = 1;
  Distribution root;
  std::vector<Branch> leaves;
};

struct Algorithm2Options {
  // also explore the closure step when a C-i replacement exists
  bool fork_closure = false;
  // steps per branch; 0 means 2n
  std::size_t depth_cap = 0;
};

BranchTree run_algorithm1(const ControlAffineSystem& sys, const RankOracle& oracle, std::size_t depth_cap = 0);
BranchTree run_algorithm2(const ControlAffineSystem& sys, const RankOracle& oracle,
                          const Algorithm2Options& options = {});

struct CandidatePair {
  system::OutputPair phi;
  std::optional<system::FlatVerdict> verdict;
  std::string error;  // set when verification raised
  bool passed() const { return verdict && verdict->passed; }
};

struct LeafCandidates {
  std::string path;
  Distribution F;
  bool from_cauchy = false;  // F = C(D_{s-1})
  Codistribution F_perp;
  std::vector<RatFunc> functions;
  std::size_t shortfall = 0;
  std::vector<CandidatePair> pairs;
  std::string note;
};

std::vector<LeafCandidates> extract_candidates(const BranchTree& tree, const ControlAffineSystem& sys,
                                               const RankOracle& oracle);

}  // namespace flatscan::algorithms
