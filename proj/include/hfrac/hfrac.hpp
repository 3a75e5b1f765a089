#pragma once

#include "calculus.hpp"
#include "data.hpp"
#include "discrete.hpp"
#include "error.hpp"
#include "group.hpp"
#include "harnack.hpp"
#include "iteration.hpp"
#include "mesh.hpp"
#include "nonlocal.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "solver.hpp"
#include "sphere.hpp"
