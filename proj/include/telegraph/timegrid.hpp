#pragma once
// Time discretization for the Duhamel convolution and the fixed-point
// iteration.
//
// A TimeGrid is a partition 0 = t_0 < ... < t_N plus a Gauss-Legendre rule
// of fixed order inside every cell.  Time-indexed modal data (ModalSeries,
// StateSeries) is stored at the nodes and at every interior Gauss point;
// values between samples come from the degree (q-1) Lagrange interpolant
// through the owning cell's Gauss points.  Sup-norms over J are taken over
// all samples.

#include <cstddef>
#include <functional>
#include <vector>

#include "telegraph/modal.hpp"

namespace telegraph {

class TimeGrid {
 public:
  TimeGrid() = default;
  // uniform partition of [0, t_end] into cells
  TimeGrid(double t_end, std::size_t cells, int gauss_order);
  // arbitrary increasing nodes starting at 0
  TimeGrid(std::vector<double> nodes, int gauss_order);

  const std::vector<double>& nodes() const { return nodes_; }
  std::size_t cells() const { return nodes_.size() - 1; }
  int gauss_order() const { return q_; }
  double t_end() const { return nodes_.back(); }
  double cell_width(std::size_t j) const { return nodes_[j + 1] - nodes_[j]; }

  // reference rule on [-1, 1]
  const std::vector<double>& ref_points() const { return ref_x_; }
  const std::vector<double>& ref_weights() const { return ref_w_; }

  // g-th Gauss point of cell j
  double gauss_time(std::size_t j, int g) const {
    return nodes_[j] + 0.5 * cell_width(j) * (ref_x_[g] + 1.0);
  }

  // total sample count: nodes then all cell points, in time order per cell
  std::size_t sample_count() const { return nodes_.size() + cells() * q_; }

  // Lagrange basis values l_g(xi) on the reference Gauss points
  std::vector<double> lagrange_at(double xi) const;

  // cell index owning time t (clamped to [0, cells()-1])
  std::size_t locate(double t) const;

 private:
  std::vector<double> nodes_;
  int q_ = 0;
  std::vector<double> ref_x_, ref_w_;
};

// Time-indexed ModalVector.  All samples share one capacity.
class ModalSeries {
 public:
  ModalSeries() = default;
  ModalSeries(TimeGrid grid, std::size_t capacity);

  const TimeGrid& grid() const { return grid_; }
  std::size_t capacity() const { return capacity_; }

  ModalVector& at_node(std::size_t j) { return node_vals_[j]; }
  const ModalVector& at_node(std::size_t j) const { return node_vals_[j]; }
  ModalVector& at_gauss(std::size_t j, int g) {
    return cell_vals_[j * grid_.gauss_order() + g];
  }
  const ModalVector& at_gauss(std::size_t j, int g) const {
    return cell_vals_[j * grid_.gauss_order() + g];
  }

  // interpolated value at arbitrary t in [0, t_end]
  ModalVector eval(double t) const;

  // mutate every sample in place
  void transform(const std::function<void(ModalVector&)>& fn);
  // max over samples of fn(value)
  double max_over_samples(const std::function<double(const ModalVector&)>& fn) const;

  // this = a*this + b*other (matching grids/capacities)
  void combine(double a, double b, const ModalSeries& other);

  static ModalSeries zero_like(const ModalSeries& other) {
    return ModalSeries(other.grid_, other.capacity_);
  }

 private:
  TimeGrid grid_;
  std::size_t capacity_ = 0;
  std::vector<ModalVector> node_vals_;
  std::vector<ModalVector> cell_vals_;
};

// Time-indexed StateVector, same sampling layout.
class StateSeries {
 public:
  StateSeries() = default;
  StateSeries(TimeGrid grid, std::size_t capacity);

  const TimeGrid& grid() const { return grid_; }
  std::size_t capacity() const { return capacity_; }

  StateVector& at_node(std::size_t j) { return node_vals_[j]; }
  const StateVector& at_node(std::size_t j) const { return node_vals_[j]; }
  StateVector& at_gauss(std::size_t j, int g) {
    return cell_vals_[j * grid_.gauss_order() + g];
  }
  const StateVector& at_gauss(std::size_t j, int g) const {
    return cell_vals_[j * grid_.gauss_order() + g];
  }

  double max_over_samples(const std::function<double(const StateVector&)>& fn) const;

  // series of first components (u); shares the grid
  ModalSeries first_components() const;

 private:
  TimeGrid grid_;
  std::size_t capacity_ = 0;
  std::vector<StateVector> node_vals_;
  std::vector<StateVector> cell_vals_;
};

}  // namespace telegraph
