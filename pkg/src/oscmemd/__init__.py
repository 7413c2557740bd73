"""Inter-area oscillation mode identification with multivariate EMD.

Typical use::

    from oscmemd import build_record, memd_decompose, rank_modes

    record = build_record(channels, sample_rate=10.0)
    imfs = memd_decompose(record)
    for cand in rank_modes(imfs):
        print(cand.imf_index, cand.classification.value, cand.median_joint_frequency)

IMF indices are 0-based; index ``n_imfs`` addresses the residue wherever a
residue is accepted.
"""

__version__ = "0.1.0"

from .emd import emd_decompose, sd_criterion, sift_once, sift_to_imf
from .envelope import (
    ExtremaSet,
    envelope_mean_univariate,
    extend_boundaries,
    find_extrema,
    spline_envelope,
)
from .exceptions import (
    AllDirectionsDegenerateError,
    BadScenarioError,
    BadSchemeError,
    DecompositionError,
    DimensionMismatchError,
    DuplicateKnotIndexError,
    EmptyWindowError,
    ImfIndexError,
    InputError,
    InsufficientExtremaError,
    LengthMismatchError,
    NonFiniteError,
    NonUniformSamplingError,
    OscMemdError,
    ParseError,
    RateInvalidError,
    TooFewCrossingsError,
    TooFewDirectionsError,
    TooFewKnotsError,
    TooShortError,
    WriteError,
    WrongChannelCountError,
)
from .hilbert import (
    AnalyticTrace,
    JointModeTrace,
    analytic_trace,
    hilbert_spectrum,
    hilbert_transform,
    joint_mode_trace,
)
from .memd import (
    DirectionSet,
    bemd_complex_decompose,
    bemd_decompose,
    generate_directions,
    memd_decompose,
    memd_sift_to_imf,
    multivariate_envelope_mean,
    project,
    temd_decompose,
)
from .modes import (
    AmplitudeSpectrum,
    Classification,
    ClassifierThresholds,
    ModeCandidate,
    classify_trend,
    fft_amplitude_spectrum,
    imf_energy,
    mode_compass,
    rank_modes,
    spectral_crest,
)
from .records import (
    DecompositionConfig,
    DirectionScheme,
    ImfSet,
    MultichannelRecord,
    SiftInfo,
    TimeSeries,
    build_record,
    reconstruct,
)
from .synth import (
    ModeSpec,
    ScenarioSpec,
    StepEvent,
    generate,
    oracle_zero_crossing_frequency,
    recovery_report,
)
