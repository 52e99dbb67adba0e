#include "telegraph/timegrid.hpp"

#include <algorithm>
#include <cmath>

#include "telegraph/errors.hpp"
#include "telegraph/quadrature.hpp"

namespace telegraph {

TimeGrid::TimeGrid(double t_end, std::size_t cells, int gauss_order) : q_(gauss_order) {
  if (!(t_end > 0.0) || cells < 1 || gauss_order < 2)
    throw ArgumentError("TimeGrid: need t_end > 0, cells >= 1, gauss_order >= 2");
  nodes_.resize(cells + 1);
  for (std::size_t j = 0; j <= cells; ++j)
    nodes_[j] = t_end * static_cast<double>(j) / static_cast<double>(cells);
  const QuadratureGrid g = QuadratureGrid::gauss_legendre(q_);
  ref_x_ = g.nodes;
  ref_w_ = g.weights;
}

TimeGrid::TimeGrid(std::vector<double> nodes, int gauss_order)
    : nodes_(std::move(nodes)), q_(gauss_order) {
  if (nodes_.size() < 2 || nodes_.front() != 0.0 || gauss_order < 2)
    throw ArgumentError("TimeGrid: nodes must start at 0 with at least one cell");
  for (std::size_t j = 0; j + 1 < nodes_.size(); ++j)
    if (!(nodes_[j + 1] > nodes_[j]))
      throw ArgumentError("TimeGrid: nodes must be strictly increasing");
  const QuadratureGrid g = QuadratureGrid::gauss_legendre(q_);
  ref_x_ = g.nodes;
  ref_w_ = g.weights;
}

std::vector<double> TimeGrid::lagrange_at(double xi) const {
  std::vector<double> out(q_, 1.0);
  for (int g = 0; g < q_; ++g)
    for (int i = 0; i < q_; ++i)
      if (i != g) out[g] *= (xi - ref_x_[i]) / (ref_x_[g] - ref_x_[i]);
  return out;
}

std::size_t TimeGrid::locate(double t) const {
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
  std::size_t j = static_cast<std::size_t>(it - nodes_.begin());
  if (j > 0) --j;
  if (j >= cells()) j = cells() - 1;
  return j;
}

ModalSeries::ModalSeries(TimeGrid grid, std::size_t capacity)
    : grid_(std::move(grid)), capacity_(capacity) {
  node_vals_.assign(grid_.nodes().size(), ModalVector(capacity_));
  cell_vals_.assign(grid_.cells() * grid_.gauss_order(), ModalVector(capacity_));
}

ModalVector ModalSeries::eval(double t) const {
  const std::size_t j = grid_.locate(t);
  const double h = grid_.cell_width(j);
  const double xi = 2.0 * (t - grid_.nodes()[j]) / h - 1.0;
  const std::vector<double> l = grid_.lagrange_at(xi);
  ModalVector out(capacity_);
  for (int g = 0; g < grid_.gauss_order(); ++g) {
    const ModalVector& s = at_gauss(j, g);
    for (std::size_t i = 0; i < capacity_; ++i) out.raw()[i] += l[g] * s.raw()[i];
  }
  return out;
}

void ModalSeries::transform(const std::function<void(ModalVector&)>& fn) {
  for (auto& v : node_vals_) fn(v);
  for (auto& v : cell_vals_) fn(v);
}

double ModalSeries::max_over_samples(
    const std::function<double(const ModalVector&)>& fn) const {
  double m = 0.0;
  for (const auto& v : node_vals_) m = std::max(m, fn(v));
  for (const auto& v : cell_vals_) m = std::max(m, fn(v));
  return m;
}

void ModalSeries::combine(double a, double b, const ModalSeries& other) {
  if (other.capacity_ != capacity_ || other.node_vals_.size() != node_vals_.size() ||
      other.cell_vals_.size() != cell_vals_.size())
    throw ArgumentError("ModalSeries::combine: layout mismatch");
  auto mix = [a, b](ModalVector& x, const ModalVector& y) {
    for (std::size_t i = 0; i < x.capacity(); ++i)
      x.raw()[i] = a * x.raw()[i] + b * y.raw()[i];
  };
  for (std::size_t i = 0; i < node_vals_.size(); ++i) mix(node_vals_[i], other.node_vals_[i]);
  for (std::size_t i = 0; i < cell_vals_.size(); ++i) mix(cell_vals_[i], other.cell_vals_[i]);
}

StateSeries::StateSeries(TimeGrid grid, std::size_t capacity)
    : grid_(std::move(grid)), capacity_(capacity) {
  node_vals_.assign(grid_.nodes().size(), StateVector::zero(capacity_));
  cell_vals_.assign(grid_.cells() * grid_.gauss_order(), StateVector::zero(capacity_));
}

double StateSeries::max_over_samples(
    const std::function<double(const StateVector&)>& fn) const {
  double m = 0.0;
  for (const auto& v : node_vals_) m = std::max(m, fn(v));
  for (const auto& v : cell_vals_) m = std::max(m, fn(v));
  return m;
}

ModalSeries StateSeries::first_components() const {
  ModalSeries out(grid_, capacity_);
  for (std::size_t j = 0; j < node_vals_.size(); ++j) out.at_node(j) = node_vals_[j].u;
  for (std::size_t j = 0; j < grid_.cells(); ++j)
    for (int g = 0; g < grid_.gauss_order(); ++g)
      out.at_gauss(j, g) = cell_vals_[j * grid_.gauss_order() + g].u;
  return out;
}

}  // namespace telegraph
