#ifndef CMC_CMC_HPP
#define CMC_CMC_HPP

// Exhaustive best-subset selection for Gaussian, binomial and Poisson
// regression with AIC, BIC and likelihood-ratio-constrained (CMC) criteria.

#include "cmc/errors.hpp"
#include "cmc/linalg.hpp"
#include "cmc/special.hpp"
#include "cmc/family.hpp"
#include "cmc/dataset.hpp"
#include "cmc/glm.hpp"
#include "cmc/subset_search.hpp"
#include "cmc/criteria.hpp"
#include "cmc/rng.hpp"
#include "cmc/simulation.hpp"
#include "cmc/csv.hpp"
#include "cmc/report.hpp"

#endif // CMC_CMC_HPP
