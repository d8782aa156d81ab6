"""Time-triggered non-monotonic funnel control of a reentry vehicle's yaw channel."""
from .boundary import (BoundaryError, CubicBridge, ExponentialSegment, FunnelSchedule,
                       build_schedule, contains, eval_phi, eval_width, hermite_bridge)
from .controller import FunnelViolation, compute_errors, control_law, gain, saturate
from .feasibility import check_condition15, check_initial, feasibility_report
from .plant import (DerivedConstants, DisturbanceSpec, PlantState, VehicleParams,
                    derive_constants, eval_disturbance, plant_rhs)
from .reference import ReferencePath, Waypoint, build_dubins, sample_ref, trigger_schedule
from .scenario import ScenarioError, load_scenario, bundled_scenario_path
from .sim import Scenario, TrajectoryRecord, simulate

__version__ = "0.1.0"
