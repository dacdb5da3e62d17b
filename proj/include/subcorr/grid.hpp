#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace subcorr {

/// Grid geometry. 1-D signals have ndim == 1 (cols is 1 and ignored);
/// images have ndim == 2 with `rows` x `cols` nodes, row-major storage.
struct Shape {
  int rows = 0;
  int cols = 1;
  int ndim = 1;

  int size() const { return ndim == 1 ? rows : rows * cols; }
  bool operator==(const Shape&) const = default;

  static Shape line(int n) { return Shape{n, 1, 1}; }
  static Shape image(int r, int c) { return Shape{r, c, 2}; }
};

/// Scalar field on a grid (a signal or an image), mesh width 1.
struct GridFunction {
  Shape shape;
  std::vector<double> v;

  GridFunction() = default;
  explicit GridFunction(Shape s) : shape(s), v(static_cast<std::size_t>(s.size()), 0.0) {}
  GridFunction(Shape s, std::vector<double> values) : shape(s), v(std::move(values)) {
    assert(static_cast<int>(v.size()) == s.size());
  }

  int size() const { return shape.size(); }
  double& at(int i) { return v[static_cast<std::size_t>(i)]; }
  double at(int i) const { return v[static_cast<std::size_t>(i)]; }
  double& at(int i, int j) { return v[static_cast<std::size_t>(i) * shape.cols + j]; }
  double at(int i, int j) const { return v[static_cast<std::size_t>(i) * shape.cols + j]; }
};

/// Vector field paired with gradients/divergences. In 1-D only `x` is used
/// (its last entry is always zero and never read); in 2-D `x` holds the
/// row-direction component and `y` the column-direction component.
struct DualField {
  Shape shape;
  std::vector<double> x;
  std::vector<double> y;

  DualField() = default;
  explicit DualField(Shape s)
      : shape(s),
        x(static_cast<std::size_t>(s.size()), 0.0),
        y(s.ndim == 2 ? static_cast<std::size_t>(s.size()) : 0, 0.0) {}

  int size() const { return shape.size(); }
};

} // namespace subcorr
