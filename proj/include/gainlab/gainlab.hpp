#pragma once

// Umbrella header.

#include "gainlab/analysis.hpp"
#include "gainlab/change.hpp"
#include "gainlab/cohort.hpp"
#include "gainlab/dataset.hpp"
#include "gainlab/descriptive.hpp"
#include "gainlab/error.hpp"
#include "gainlab/inference.hpp"
#include "gainlab/plot_data.hpp"
#include "gainlab/report.hpp"
#include "gainlab/score.hpp"
#include "gainlab/simulate.hpp"
#include "gainlab/special.hpp"
