#pragma once

// Brute-force restatement of the correlation clustering, used as a test
// oracle. Written without reference to the library's loop structure.

#include <cmath>
#include <vector>

#include "facejet/separability.hpp"

namespace facejet::testing {

struct OracleState {
  std::vector<double> cx, cy;  // centers used for the assignment
  std::vector<int> group;      // assignment per candidate
};

inline double naive_cosine(std::span<const double> a, std::span<const double> b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0 || bb == 0) return 0.0;
  return ab / (std::sqrt(aa) * std::sqrt(bb));
}

inline double naive_mean_similarity(Pixel a, Pixel b, const TrainingJets& jets) {
  double s = 0.0;
  for (const auto& f : jets.fields) s += naive_cosine(f.jet(a), f.jet(b));
  return s / static_cast<double>(jets.fields.size());
}

inline std::vector<OracleState> oracle_cluster(const CandidateSet& pf, int q, int max_steps,
                                               const TrainingJets& jets) {
  const std::size_t n = pf.size();
  std::vector<OracleState> states;
  OracleState cur;
  for (int k = 0; k < q; ++k) {
    cur.cx.push_back(pf.points[k].pixel.x);
    cur.cy.push_back(pf.points[k].pixel.y);
  }
  std::vector<int> previous(n, -1);
  for (int step = 0;; ++step) {
    cur.group.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      double best = -1e300;
      for (int k = 0; k < q; ++k) {
        const Pixel center{static_cast<int>(std::round(cur.cx[k])), static_cast<int>(std::round(cur.cy[k]))};
        const double s = naive_mean_similarity(pf.points[i].pixel, center, jets);
        if (s > best) {
          best = s;
          cur.group[i] = k;
        }
      }
    }
    states.push_back(cur);
    const bool moved = cur.group != previous;
    previous = cur.group;
    if (step >= max_steps || !moved) break;
    for (int k = 0; k < q; ++k) {
      double w = 0, x = 0, y = 0, ux = 0, uy = 0;
      int members = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (cur.group[i] != k) continue;
        const double j = pf.points[i].separability;
        w += j;
        x += j * pf.points[i].pixel.x;
        y += j * pf.points[i].pixel.y;
        ux += pf.points[i].pixel.x;
        uy += pf.points[i].pixel.y;
        ++members;
      }
      if (members == 0) continue;
      cur.cx[k] = w > 0 ? x / w : ux / members;
      cur.cy[k] = w > 0 ? y / w : uy / members;
    }
  }
  return states;
}

}  // namespace facejet::testing
