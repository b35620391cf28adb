#include "lacg/active_set.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace lacg {

ActiveSet::ActiveSet(Vertex start) {
  point_ = start.point;
  vertices_.push_back(std::move(start));
  weights_.push_back(1.0);
}

std::optional<std::size_t> ActiveSet::find(const VertexKey& key) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i].key == key) return i;
  }
  return std::nullopt;
}

std::size_t ActiveSet::add_or_find(const Vertex& s) {
  if (auto i = find(s.key)) return *i;
  vertices_.push_back(s);
  weights_.push_back(0.0);
  return vertices_.size() - 1;
}

void ActiveSet::move_toward(const Vertex& s, double gamma) {
  if (gamma <= 0.0) return;
  for (double& w : weights_) w *= (1.0 - gamma);
  const std::size_t idx = add_or_find(s);
  weights_[idx] += gamma;
  point_ = (1.0 - gamma) * point_ + gamma * s.point;
  prune();
}

void ActiveSet::move_away(std::size_t i, double gamma) {
  if (gamma <= 0.0) return;
  for (double& w : weights_) w *= (1.0 + gamma);
  weights_[i] -= gamma;
  point_ = (1.0 + gamma) * point_ - gamma * vertices_[i].point;
  prune();
}

void ActiveSet::transfer(std::size_t from, const Vertex& s, double gamma) {
  if (gamma <= 0.0) return;
  const Vector away_point = vertices_[from].point;
  weights_[from] -= gamma;
  const std::size_t idx = add_or_find(s);
  weights_[idx] += gamma;
  point_ += gamma * (s.point - away_point);
  prune();
}

void ActiveSet::assign(std::vector<Vertex> vertices, std::vector<double> weights) {
  if (vertices.size() != weights.size() || vertices.empty()) {
    throw std::invalid_argument("ActiveSet::assign: need matching, nonempty vertices and weights");
  }
  vertices_ = std::move(vertices);
  weights_ = std::move(weights);
  refresh_point();
  prune();
  refresh_point();
}

void ActiveSet::refresh_point() {
  if (vertices_.empty()) return;
  point_ = Vector::Zero(vertices_.front().point.size());
  for (std::size_t i = 0; i < vertices_.size(); ++i) point_ += weights_[i] * vertices_[i].point;
}

void ActiveSet::prune() {
  std::size_t kept = 0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (weights_[i] > kPruneThreshold) {
      if (kept != i) {
        vertices_[kept] = std::move(vertices_[i]);
        weights_[kept] = weights_[i];
      }
      ++kept;
    }
  }
  const bool removed = kept != vertices_.size();
  vertices_.resize(kept);
  weights_.resize(kept);
  if (kept == 0) throw std::logic_error("ActiveSet: all weights vanished");

  double total = 0.0;
  for (double w : weights_) total += w;
  if (removed || std::abs(total - 1.0) > 1e-13) {
    for (double& w : weights_) w /= total;
    refresh_point();
    updates_since_refresh_ = 0;
  } else if (++updates_since_refresh_ >= 32) {
    refresh_point();
    updates_since_refresh_ = 0;
  }
}

std::string ActiveSet::check_invariants(double tol) const {
  std::ostringstream err;
  if (vertices_.empty()) return "empty active set";
  if (vertices_.size() != weights_.size()) return "weights/vertices size mismatch";
  double total = 0.0;
  std::unordered_set<VertexKey, VertexKeyHash> keys;
  Vector recon = Vector::Zero(point_.size());
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!(weights_[i] > 0.0)) err << "non-positive weight at " << i << "; ";
    if (!keys.insert(vertices_[i].key).second) err << "duplicate key " << to_string(vertices_[i].key) << "; ";
    total += weights_[i];
    recon += weights_[i] * vertices_[i].point;
  }
  if (std::abs(total - 1.0) > 1e-12) err << "weights sum to " << total << "; ";
  const double drift = (recon - point_).norm();
  if (drift > tol) err << "point drift " << drift << "; ";
  if (!point_.allFinite()) err << "non-finite point; ";
  return err.str();
}

}  // namespace lacg
