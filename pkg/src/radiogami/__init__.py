"""RadioGami: a desk-scale simulator and receiver DSP toolkit for
batteryless tunnel-diode paper tags.

The library models the full sensing chain — light harvesting, intermittent
power switching, interaction-driven frequency transduction, the RF link
budget, and SDR-style spectral event detection — and ships a `radiogami`
CLI that replays scenarios and reproduces the published measurement tables
and figures.
"""

from .errors import DomainError, InputError, ModelError, NoOscillationError, RadioGamiError
from .tdo import (
    BiasNetwork,
    BiasPoint,
    DurabilityCurve,
    ResonantTank,
    StabilityReport,
    TunnelDiode,
    bias_point,
    cycles_to_failure,
    iv_current,
    load_default_diode,
    load_default_durability,
    oscillation_frequency,
    stability_ratio,
    tdo_input_power,
)
from .harvest import (
    Feasibility,
    PhotodiodeArray,
    Supercapacitor,
    charge_step,
    feasibility,
    harvest_power,
    load_default_array,
    time_to_voltage,
)
from .switching import (
    LightResponseModel,
    SwitchingProfile,
    TimerConfig,
    average_power,
    check_stated_switching,
    clock_frequency,
    design_timer,
    duty_cycle,
    frequency_under_light,
)
from .transducers import (
    TagState,
    Transducer,
    TriggerSwitch,
    activate,
    offset_deformation,
    offset_origami,
    offset_rotary,
    offset_slider,
    offset_tear,
    offset_tilt,
    trigger_evaluate,
)
from .channel import (
    CompliancePolicy,
    FloorModel,
    PathLossModel,
    compliance_check,
    fit_path_loss,
    floor_snr,
    load_default_floor_model,
    max_range,
    snr_at,
    snr_db,
)
from .dsp import (
    IQStream,
    Spectrogram,
    SnrEstimate,
    TagEvent,
    ToneBurst,
    detect_events,
    estimate_snr,
    overlap_analysis,
    read_iq,
    stft,
    synthesize_iq,
    synthesize_spectrogram,
    window_coefficients,
    write_iq,
)
from .analytics import (
    DetectionReport,
    FrequencyStats,
    GroundTruthLog,
    energy_report,
    frequency_stats,
    match_events,
    pearson_correlation,
    regression_fit,
)
from .scenario import (
    Scenario,
    build_deployment_scenario,
    load_deployment_scenario,
    load_scenario,
    run,
    scenario_from_dict,
    step,
    sweep,
)

__version__ = "0.1.0"
