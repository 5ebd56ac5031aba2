// Evaluates a hand-picked design against the builtin target-wide scenario and
// prints its URDF.

#include <cstdio>

#include "morphoforge/morphoforge.hpp"

int main() {
  using namespace morphoforge;

  const RobotDesign design = parse_design("Y:0.25,P:0.2,S:0.35,P:0.2,R:0.1,F:0.01");
  const Scenario scenario = *find_builtin_scenario("target-wide");

  const auto task = eval_task(design, scenario, IkConfig{});
  const auto cost = eval_design(design);
  std::printf("%s: e_task %.6f  e_design %.6f (dof %d, length %.3f m)\n",
              design.joint_string().c_str(), task.e_task, cost.e_design, cost.joint, cost.length);
  for (std::size_t i = 0; i < task.per_target.size(); ++i) {
    std::printf("  target %zu residual %.3g\n", i, task.per_target[i]);
  }
  std::fputs(export_urdf(design, "wide_example").c_str(), stdout);
  return 0;
}
