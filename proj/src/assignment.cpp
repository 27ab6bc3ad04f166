#include "mftrack/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mft {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Dijkstra-based augmenting path from `start_row` over the reduced costs.
// Returns the sink column, or -1 when no allowed augmenting path exists.
int augmenting_path(int n_rows, int n_cols, const std::vector<double>& cost,
                    std::vector<double>& u, std::vector<double>& v,
                    std::vector<int>& path, const std::vector<int>& col_to_row,
                    std::vector<double>& shortest, std::vector<char>& scanned_rows,
                    std::vector<char>& scanned_cols, int start_row, double* out_min) {
  std::fill(shortest.begin(), shortest.end(), kInf);
  std::fill(scanned_rows.begin(), scanned_rows.end(), 0);
  std::fill(scanned_cols.begin(), scanned_cols.end(), 0);

  double min_val = 0.0;
  int i = start_row;
  int sink = -1;
  while (sink == -1) {
    scanned_rows[i] = 1;
    int index = -1;
    double lowest = kInf;
    for (int j = 0; j < n_cols; ++j) {
      if (scanned_cols[j]) continue;
      double r = min_val + cost[static_cast<size_t>(i) * n_cols + j] - u[i] - v[j];
      if (r < shortest[j]) {
        path[j] = i;
        shortest[j] = r;
      }
      if (shortest[j] < lowest ||
          (shortest[j] == lowest && index >= 0 && col_to_row[j] == -1 &&
           col_to_row[index] != -1)) {
        lowest = shortest[j];
        index = j;
      }
    }
    min_val = lowest;
    if (std::isinf(min_val)) return -1;
    if (col_to_row[index] == -1) {
      sink = index;
    } else {
      i = col_to_row[index];
    }
    scanned_cols[index] = 1;
  }
  *out_min = min_val;
  return sink;
}

// Solves with n_rows <= n_cols; row_to_col[i] == -1 marks an unmatched row.
void solve_oriented(int n_rows, int n_cols, const std::vector<double>& cost,
                    std::vector<int>& row_to_col) {
  std::vector<double> u(n_rows, 0.0), v(n_cols, 0.0);
  std::vector<double> shortest(n_cols);
  std::vector<int> path(n_cols, -1);
  std::vector<int> col_to_row(n_cols, -1);
  std::vector<char> scanned_rows(n_rows), scanned_cols(n_cols);
  row_to_col.assign(n_rows, -1);

  for (int cur = 0; cur < n_rows; ++cur) {
    double min_val = 0.0;
    int sink = augmenting_path(n_rows, n_cols, cost, u, v, path, col_to_row, shortest,
                               scanned_rows, scanned_cols, cur, &min_val);
    if (sink < 0) continue;  // no allowed column reachable; row stays unmatched

    u[cur] += min_val;
    for (int i = 0; i < n_rows; ++i) {
      if (scanned_rows[i] && i != cur) u[i] += min_val - shortest[row_to_col[i]];
    }
    for (int j = 0; j < n_cols; ++j) {
      if (scanned_cols[j]) v[j] -= min_val - shortest[j];
    }

    int j = sink;
    while (true) {
      int i = path[j];
      col_to_row[j] = i;
      std::swap(row_to_col[i], j);
      if (i == cur) break;
    }
  }
}

// Rewrites equal-cost optima into the lexicographically smallest matched set.
// Each move preserves cardinality, total cost, and forbidden avoidance.
void normalize_ties(const CostMatrix& m, std::vector<int>& row_to_col) {
  std::vector<char> col_used(m.cols, 0);
  for (int c : row_to_col) {
    if (c >= 0) col_used[c] = 1;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < m.rows; ++i) {
      int ci = row_to_col[i];
      if (ci < 0) continue;
      // Pull the match up to an earlier unmatched row of identical cost.
      for (int k = 0; k < i; ++k) {
        if (row_to_col[k] == -1 && m.at(k, ci) == m.at(i, ci)) {
          row_to_col[k] = ci;
          row_to_col[i] = -1;
          changed = true;
          break;
        }
      }
      if (row_to_col[i] != ci) continue;
      // Slide the match left to an earlier unmatched column of identical cost.
      for (int c = 0; c < ci; ++c) {
        if (!col_used[c] && m.at(i, c) == m.at(i, ci)) {
          col_used[ci] = 0;
          col_used[c] = 1;
          row_to_col[i] = c;
          ci = c;
          changed = true;
          break;
        }
      }
      // Swap columns with a later row when the cross costs match exactly.
      for (int k = i + 1; k < m.rows; ++k) {
        int ck = row_to_col[k];
        if (ck < 0 || ck >= ci) continue;
        double cross_a = m.at(i, ck);
        double cross_b = m.at(k, ci);
        if (std::isinf(cross_a) || std::isinf(cross_b)) continue;
        if (cross_a + cross_b == m.at(i, ci) + m.at(k, ck)) {
          row_to_col[i] = ck;
          row_to_col[k] = ci;
          ci = ck;
          changed = true;
        }
      }
    }
  }
}

}  // namespace

Assignment solve_assignment(const CostMatrix& m) {
  if (m.rows < 0 || m.cols < 0 ||
      m.values.size() != static_cast<size_t>(m.rows) * static_cast<size_t>(m.cols)) {
    throw std::invalid_argument("cost matrix shape does not match its storage");
  }
  for (double v : m.values) {
    if (std::isnan(v)) throw std::invalid_argument("cost matrix contains NaN");
  }

  // Forbidden entries become a finite surcharge M exceeding any possible sum
  // of real costs. Minimizing then uses as few surcharged edges as possible
  // (maximum real cardinality) and picks the cheapest real matching among
  // those; surcharged edges are dropped from the result afterwards.
  std::vector<double> work(m.values.size());
  double shift = 0.0;
  for (double v : m.values) {
    if (!std::isinf(v) && v < shift) shift = v;
  }
  double sum = 0.0;
  for (double v : m.values) {
    if (!std::isinf(v)) sum += v - shift;
  }
  const double big = sum + 1.0;
  for (size_t i = 0; i < m.values.size(); ++i) {
    work[i] = std::isinf(m.values[i]) ? big : m.values[i] - shift;
  }

  std::vector<int> row_to_col(m.rows, -1);
  if (m.rows > 0 && m.cols > 0) {
    if (m.rows <= m.cols) {
      solve_oriented(m.rows, m.cols, work, row_to_col);
    } else {
      std::vector<double> t(work.size());
      for (int r = 0; r < m.rows; ++r) {
        for (int c = 0; c < m.cols; ++c) {
          t[static_cast<size_t>(c) * m.rows + r] = work[static_cast<size_t>(r) * m.cols + c];
        }
      }
      std::vector<int> col_to_row;
      solve_oriented(m.cols, m.rows, t, col_to_row);
      for (int c = 0; c < m.cols; ++c) {
        if (col_to_row[c] >= 0) row_to_col[col_to_row[c]] = c;
      }
    }
    for (int r = 0; r < m.rows; ++r) {
      if (row_to_col[r] >= 0 && std::isinf(m.at(r, row_to_col[r]))) row_to_col[r] = -1;
    }
    normalize_ties(m, row_to_col);
  }

  Assignment out;
  std::vector<char> col_used(m.cols, 0);
  for (int r = 0; r < m.rows; ++r) {
    int c = row_to_col[r];
    if (c >= 0) {
      out.matched.push_back({r, c, m.at(r, c)});
      col_used[c] = 1;
    } else {
      out.unmatched_tracks.push_back(r);
    }
  }
  for (int c = 0; c < m.cols; ++c) {
    if (!col_used[c]) out.unmatched_detections.push_back(c);
  }
  return out;
}

Assignment gate_assignment(const Assignment& a, double tau_match) {
  if (!(tau_match > 0.0 && tau_match <= 1.0)) {
    throw std::invalid_argument("tau_match must lie in (0, 1]");
  }
  Assignment out;
  out.unmatched_tracks = a.unmatched_tracks;
  out.unmatched_detections = a.unmatched_detections;
  for (const auto& p : a.matched) {
    if (p.cost > tau_match) {
      out.unmatched_tracks.push_back(p.track);
      out.unmatched_detections.push_back(p.detection);
    } else {
      out.matched.push_back(p);
    }
  }
  std::sort(out.unmatched_tracks.begin(), out.unmatched_tracks.end());
  std::sort(out.unmatched_detections.begin(), out.unmatched_detections.end());
  return out;
}

}  // namespace mft
