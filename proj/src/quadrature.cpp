#include "possalloc/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <memory>

#include "possalloc/error.hpp"

namespace possalloc {

GaussLegendre::GaussLegendre(std::size_t points) {
  if (points < 1) throw InvalidParameter("Gauss-Legendre rule needs at least one point");

  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)>
      table(gsl_integration_glfixed_table_alloc(points), &gsl_integration_glfixed_table_free);
  if (!table) throw InvalidParameter("unable to build Gauss-Legendre table");

  nodes_.resize(points);
  weights_.resize(points);
  for (std::size_t i = 0; i < points; ++i) {
    gsl_integration_glfixed_point(0.0, 1.0, i, &nodes_[i], &weights_[i], table.get());
  }
}

}  // namespace possalloc
