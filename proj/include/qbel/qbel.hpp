#pragma once

// Umbrella header for the whole library.

#include "qbel/belief.hpp"
#include "qbel/document.hpp"
#include "qbel/enrichment.hpp"
#include "qbel/errors.hpp"
#include "qbel/fusion.hpp"
#include "qbel/label.hpp"
#include "qbel/proposition.hpp"
#include "qbel/rational.hpp"
#include "qbel/render.hpp"
