#pragma once

#include "lohi/activity.hpp"
#include "lohi/audit.hpp"
#include "lohi/coarsen.hpp"
#include "lohi/csv.hpp"
#include "lohi/dataset.hpp"
#include "lohi/error.hpp"
#include "lohi/fingerprint.hpp"
#include "lohi/hi_split.hpp"
#include "lohi/kcut.hpp"
#include "lohi/lo_split.hpp"
#include "lohi/manifest.hpp"
#include "lohi/metrics.hpp"
#include "lohi/morgan.hpp"
#include "lohi/random.hpp"
#include "lohi/simgraph.hpp"
#include "lohi/smiles.hpp"
#include "lohi/version.hpp"
