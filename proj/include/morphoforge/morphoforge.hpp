#pragma once

#include "morphoforge/archive.hpp"
#include "morphoforge/errors.hpp"
#include "morphoforge/ik_solver.hpp"
#include "morphoforge/joint_module.hpp"
#include "morphoforge/kinematics.hpp"
#include "morphoforge/nsga2.hpp"
#include "morphoforge/objectives.hpp"
#include "morphoforge/pareto.hpp"
#include "morphoforge/scenario.hpp"
#include "morphoforge/urdf.hpp"
