from app.imethod.gronwall import (
    blowup_time_predictor,
    calibrate_constant,
    cutoff_for_horizon,
    energy_ceiling,
    gronwall_bound,
    gronwall_crossing_time,
    lambda_statistic,
    observed_crossing_time,
)
from app.imethod.ledger import EnergyTrace, energy_growth_decomposition
from app.imethod.multiplier import (
    IParams,
    apply_i,
    i_multiplier,
    modified_energy,
    symmetrized_multiplier,
)
from app.imethod.probes import (
    commutator_v2_probe,
    commutator_vz_probe,
    iz_moment_check,
    v2_probe_scan,
    vz_probe_scan,
)

__all__ = [
    "EnergyTrace",
    "IParams",
    "apply_i",
    "blowup_time_predictor",
    "calibrate_constant",
    "commutator_v2_probe",
    "commutator_vz_probe",
    "cutoff_for_horizon",
    "energy_ceiling",
    "energy_growth_decomposition",
    "gronwall_bound",
    "gronwall_crossing_time",
    "i_multiplier",
    "iz_moment_check",
    "lambda_statistic",
    "modified_energy",
    "observed_crossing_time",
    "symmetrized_multiplier",
    "v2_probe_scan",
    "vz_probe_scan",
]
