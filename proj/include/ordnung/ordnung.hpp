#pragma once

// Umbrella header.

#include "ordnung/errors.hpp"
#include "ordnung/order.hpp"
#include "ordnung/bv.hpp"
#include "ordnung/tameness.hpp"
#include "ordnung/selection.hpp"
#include "ordnung/representation.hpp"
#include "ordnung/gallery.hpp"
