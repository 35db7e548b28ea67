#pragma once

#include <span>

#include "gct/kernels.hpp"

namespace gct::detail {

// Throws LayoutMismatchError unless every test image shares the store layout
// (or, without a store, the first image's layout).
void check_test_layouts(const TemplateStore* store, std::span<const TestImage> probes,
                        std::span<const TestImage> galleries);

}  // namespace gct::detail
