#include <map>
#include <string>
#include <vector>

#include "tdbem/experiments.h"

namespace tdbem {
namespace {

// One config per example. Time steps halve with each refinement.
const std::map<std::string, std::string>& presets() {
  static const std::map<std::string, std::string> table = {
      {"example1_h_beta1", R"(name=example1_h_beta1
problem=dirichlet_v
geometry=segment
vertices=-0.5,0;0.5,0
material.lambda=2
material.mu=1
material.rho=1
datum=x4_profile
datum.coef1=1
datum.coef2=1
T=1
benchmark=3.7915e-2
benchmark.source=reference value: hp sigma=0.2 p=7
output.tip=-0.5,0
output.tip_radius=0.005
output.trace_times=0.25,0.5,1
level.mesh=algebraic:1:5
level.degree=0
level.dt=1.25e-2
level.mesh=algebraic:1:10
level.degree=0
level.dt=6.25e-3
level.mesh=algebraic:1:20
level.degree=0
level.dt=3.125e-3
level.mesh=algebraic:1:40
level.degree=0
level.dt=1.5625e-3
)"},
      {"example1_h_beta2", R"(name=example1_h_beta2
problem=dirichlet_v
geometry=segment
vertices=-0.5,0;0.5,0
material.lambda=2
material.mu=1
material.rho=1
datum=x4_profile
datum.coef1=1
datum.coef2=1
T=1
benchmark=3.7915e-2
benchmark.source=reference value: hp sigma=0.2 p=7
output.tip=-0.5,0
output.tip_radius=0.005
output.trace_times=0.25,0.5,1
level.mesh=algebraic:2:5
level.degree=0
level.dt=1.25e-2
level.mesh=algebraic:2:10
level.degree=0
level.dt=6.25e-3
level.mesh=algebraic:2:20
level.degree=0
level.dt=3.125e-3
level.mesh=algebraic:2:40
level.degree=0
level.dt=1.5625e-3
)"},
      {"example1_h_beta3", R"(name=example1_h_beta3
problem=dirichlet_v
geometry=segment
vertices=-0.5,0;0.5,0
material.lambda=2
material.mu=1
material.rho=1
datum=x4_profile
datum.coef1=1
datum.coef2=1
T=1
benchmark=3.7915e-2
benchmark.source=reference value: hp sigma=0.2 p=7
output.tip=-0.5,0
output.tip_radius=0.005
output.trace_times=0.25,0.5,1
level.mesh=algebraic:3:5
level.degree=0
level.dt=1.25e-2
level.mesh=algebraic:3:10
level.degree=0
level.dt=6.25e-3
level.mesh=algebraic:3:20
level.degree=0
level.dt=3.125e-3
level.mesh=algebraic:3:40
level.degree=0
level.dt=1.5625e-3
)"},
      {"example1_p", R"(name=example1_p
problem=dirichlet_v
geometry=segment
vertices=-0.5,0;0.5,0
material.lambda=2
material.mu=1
material.rho=1
datum=x4_profile
datum.coef1=1
datum.coef2=1
T=1
benchmark=3.7915e-2
benchmark.source=reference value: hp sigma=0.2 p=7
level.mesh=uniform:10
level.degree=1
level.dt=2.5e-2
level.mesh=uniform:10
level.degree=2
level.dt=1.25e-2
level.mesh=uniform:10
level.degree=3
level.dt=6.25e-3
level.mesh=uniform:10
level.degree=4
level.dt=3.125e-3
level.mesh=uniform:10
level.degree=5
level.dt=1.5625e-3
level.mesh=uniform:10
level.degree=6
level.dt=7.8125e-4
level.mesh=uniform:10
level.degree=7
level.dt=3.90625e-4
)"},
      {"example1_hp_sigma02", R"(name=example1_hp_sigma02
problem=dirichlet_v
geometry=segment
vertices=-0.5,0;0.5,0
material.lambda=2
material.mu=1
material.rho=1
datum=x4_profile
datum.coef1=1
datum.coef2=1
T=1
benchmark=3.7915e-2
benchmark.source=reference value: hp sigma=0.2 p=7
level.mesh=geometric:0.2:0
level.degree=0
level.dt=2.5e-1
level.mesh=geometric:0.2:1
level.degree=1
level.dt=1.25e-1
level.mesh=geometric:0.2:2
level.degree=2
level.dt=6.25e-2
level.mesh=geometric:0.2:3
level.degree=3
level.dt=3.125e-2
level.mesh=geometric:0.2:4
level.degree=4
level.dt=1.5625e-2
level.mesh=geometric:0.2:5
level.degree=5
level.dt=7.8125e-3
level.mesh=geometric:0.2:6
level.degree=6
level.dt=3.90625e-3
level.mesh=geometric:0.2:7
level.degree=7
level.dt=1.953125e-3
)"},
      {"example1_hp_sigma05", R"(name=example1_hp_sigma05
problem=dirichlet_v
geometry=segment
vertices=-0.5,0;0.5,0
material.lambda=2
material.mu=1
material.rho=1
datum=x4_profile
datum.coef1=1
datum.coef2=1
T=1
benchmark=3.7915e-2
benchmark.source=reference value: hp sigma=0.2 p=7
level.mesh=geometric:0.5:0
level.degree=0
level.dt=2.5e-1
level.mesh=geometric:0.5:1
level.degree=1
level.dt=1.25e-1
level.mesh=geometric:0.5:2
level.degree=2
level.dt=6.25e-2
level.mesh=geometric:0.5:3
level.degree=3
level.dt=3.125e-2
level.mesh=geometric:0.5:4
level.degree=4
level.dt=1.5625e-2
level.mesh=geometric:0.5:5
level.degree=5
level.dt=7.8125e-3
level.mesh=geometric:0.5:6
level.degree=6
level.dt=3.90625e-3
level.mesh=geometric:0.5:7
level.degree=7
level.dt=1.953125e-3
)"},
      {"example2_h_beta3", R"(name=example2_h_beta3
problem=dirichlet_v
geometry=segment
vertices=-0.5,0;0.5,0
material.lambda=2
material.mu=1
material.rho=1
datum=x_profile
datum.coef1=1
datum.coef2=1
T=1
output.tip=0.5,0
output.tip_radius=0.005
output.trace_times=1
level.mesh=algebraic:3:5
level.degree=0
level.dt=1.25e-2
level.mesh=algebraic:3:10
level.degree=0
level.dt=6.25e-3
level.mesh=algebraic:3:20
level.degree=0
level.dt=3.125e-3
level.mesh=algebraic:3:40
level.degree=0
level.dt=1.5625e-3
)"},
      // equilateral triangle on the base [-0.5, 0.5] x {0}
      {"example3_triangle_beta1", R"(name=example3_triangle_beta1
problem=dirichlet_v
geometry=polygon
vertices=-0.5,0;0.5,0;0,0.86602540378443865
material.lambda=2
material.mu=1
material.rho=1
datum=abs_x_9p5
datum.coef1=0
datum.coef2=100
T=1
output.tip=-0.5,0
output.tip_radius=0.005
output.trace_times=1
level.mesh=algebraic:1:5
level.degree=0
level.dt=5e-2
level.mesh=algebraic:1:10
level.degree=0
level.dt=2.5e-2
level.mesh=algebraic:1:20
level.degree=0
level.dt=1.25e-2
level.mesh=algebraic:1:40
level.degree=0
level.dt=6.25e-3
)"},
      {"example3_triangle_beta2", R"(name=example3_triangle_beta2
problem=dirichlet_v
geometry=polygon
vertices=-0.5,0;0.5,0;0,0.86602540378443865
material.lambda=2
material.mu=1
material.rho=1
datum=abs_x_9p5
datum.coef1=0
datum.coef2=100
T=1
output.tip=-0.5,0
output.tip_radius=0.005
output.trace_times=1
level.mesh=algebraic:2:5
level.degree=0
level.dt=5e-2
level.mesh=algebraic:2:10
level.degree=0
level.dt=2.5e-2
level.mesh=algebraic:2:20
level.degree=0
level.dt=1.25e-2
level.mesh=algebraic:2:40
level.degree=0
level.dt=6.25e-3
)"},
      {"example3_triangle_beta3", R"(name=example3_triangle_beta3
problem=dirichlet_v
geometry=polygon
vertices=-0.5,0;0.5,0;0,0.86602540378443865
material.lambda=2
material.mu=1
material.rho=1
datum=abs_x_9p5
datum.coef1=0
datum.coef2=100
T=1
output.tip=-0.5,0
output.tip_radius=0.005
output.trace_times=1
level.mesh=algebraic:3:5
level.degree=0
level.dt=5e-2
level.mesh=algebraic:3:10
level.degree=0
level.dt=2.5e-2
level.mesh=algebraic:3:20
level.degree=0
level.dt=1.25e-2
level.mesh=algebraic:3:40
level.degree=0
level.dt=6.25e-3
)"},
      // isosceles triangle with base angles 3 pi / 8; 75 elements on the base
      {"example3_gamma2", R"(name=example3_gamma2
problem=dirichlet_v
geometry=polygon
vertices=-0.5,0;0.5,0;0,1.2071067811865475
material.lambda=2
material.mu=1
material.rho=1
datum=abs_x_9p5
datum.coef1=0
datum.coef2=100
T=1
output.tip=-0.5,0
output.tip_radius=0.005
output.trace_times=0.5,1
level.mesh=algebraic:3:40
level.sides=75,80,80
level.degree=0
level.dt=6.25e-3
)"},
      // isosceles triangle with base angles 7 pi / 24; 87 elements on the base
      {"example3_gamma3", R"(name=example3_gamma3
problem=dirichlet_v
geometry=polygon
vertices=-0.5,0;0.5,0;0,0.6516126864206028
material.lambda=2
material.mu=1
material.rho=1
datum=abs_x_9p5
datum.coef1=0
datum.coef2=100
T=1
output.tip=-0.5,0
output.tip_radius=0.005
output.trace_times=0.5,1
level.mesh=algebraic:3:40
level.sides=87,80,80
level.degree=0
level.dt=6.25e-3
)"},
      // regular pentagon with unit sides, interior angles 3 pi / 5
      {"example3_gamma4", R"(name=example3_gamma4
problem=dirichlet_v
geometry=polygon
vertices=-0.5,0;0.5,0;0.80901699437494745,0.95105651629515353;0,1.5388417685876268;-0.80901699437494745,0.95105651629515353
material.lambda=2
material.mu=1
material.rho=1
datum=abs_x_9p5
datum.coef1=0
datum.coef2=100
T=1
output.tip=-0.5,0
output.tip_radius=0.005
output.trace_times=0.5,1
level.mesh=algebraic:3:40
level.sides=80,80,80,80,80
level.degree=0
level.dt=6.25e-3
)"},
      {"example4_gamma2_unit", R"(name=example4_gamma2_unit
problem=dirichlet_v
geometry=polygon
vertices=-0.5,0;0.5,0;0,1.2071067811865475
material.lambda=2
material.mu=1
material.rho=1
datum=unit_profile
datum.coef1=0
datum.coef2=1
T=1
output.tip=-0.5,0
output.tip_radius=0.005
output.trace_times=1
level.mesh=algebraic:3:40
level.sides=75,80,80
level.degree=0
level.dt=6.25e-3
)"},
      {"example4_gamma2_x4", R"(name=example4_gamma2_x4
problem=dirichlet_v
geometry=polygon
vertices=-0.5,0;0.5,0;0,1.2071067811865475
material.lambda=2
material.mu=1
material.rho=1
datum=x4_profile
datum.coef1=0
datum.coef2=1
T=1
output.tip=-0.5,0
output.tip_radius=0.005
output.trace_times=1
level.mesh=algebraic:3:40
level.sides=75,80,80
level.degree=0
level.dt=6.25e-3
)"},
      {"example5_cp2", R"(name=example5_cp2
problem=neumann_w
geometry=segment
vertices=-0.5,0;0.5,0
material.cp=2
material.cs=1
material.rho=1
datum=constant_eta
datum.coef1=1
datum.coef2=1
T=7.5
output.history_point=0,0
output.trace_times=7.5
level.mesh=uniform:40
level.degree=1
level.continuity=vanishing_at_tips
level.dt=1.25e-2
)"},
      {"example5_cp3", R"(name=example5_cp3
problem=neumann_w
geometry=segment
vertices=-0.5,0;0.5,0
material.cp=3
material.cs=1
material.rho=1
datum=constant_eta
datum.coef1=1
datum.coef2=1
T=7.5
output.history_point=0,0
output.trace_times=7.5
level.mesh=uniform:40
level.degree=1
level.continuity=vanishing_at_tips
level.dt=1.25e-2
)"},
  };
  return table;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : presets()) out.push_back(k);
  return out;
}

std::string preset_text(const std::string& name) {
  const auto it = presets().find(name);
  if (it == presets().end()) throw ConfigError("unknown preset: " + name);
  return it->second;
}

}  // namespace tdbem
