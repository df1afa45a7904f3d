"""Maximum voiced frequency estimation from amplitude and phase spectra.

The package estimates, per analysis frame, the boundary below which a
voiced signal behaves harmonically and above which it is noise-like. It
also ships a semi-synthetic corpus generator, a Gaussian model trainer and
a threshold-sweep evaluation harness, wired together by the ``mvfest``
command line tool.
"""
from .decision import (FeatureStats, FeatureVector, FrameDecision, GaussianModel,
                       decide_from_loglik, decide_mvf, fit_model, log_likelihood,
                       posterior)
from .errors import (EvaluationError, FormatError, MvfError, TrainingError,
                     ValidationError)
from .evaluation import EvalReport, ScoreResult, compare_methods, score
from .features import (DifferentialPhase, differential_phase, feature_as,
                       feature_icpc, feature_ihpc)
from .harmonics import HarmonicCandidate, detect_candidates, refine_f0
from .pipeline import Diagnostics, PipelineConfig, estimate_contour, train_from_manifest
from .signal_io import (AudioBuffer, F0Track, MvfContour, read_contour_csv,
                        read_f0_csv, read_model, read_wav, write_contour_csv,
                        write_f0_csv, write_model, write_wav)
from .smoothing import SmootherConfig, smooth
from .spectral import FrameAnalysis, FrameSpec, analyze_frame, extract_frame, wrap_phase
from .synth import (CorpusManifest, ManifestEntry, SynthSpec, generate_corpus,
                    load_manifest, save_manifest, synthesize)

__version__ = "0.1.0"

__all__ = [
    "AudioBuffer", "CorpusManifest", "Diagnostics", "DifferentialPhase",
    "EvalReport", "EvaluationError", "F0Track", "FeatureStats", "FeatureVector",
    "FormatError", "FrameAnalysis", "FrameDecision", "FrameSpec",
    "GaussianModel", "HarmonicCandidate", "ManifestEntry", "MvfContour",
    "MvfError", "PipelineConfig", "ScoreResult", "SmootherConfig", "SynthSpec",
    "TrainingError", "ValidationError", "analyze_frame", "compare_methods",
    "decide_from_loglik", "decide_mvf", "detect_candidates",
    "differential_phase", "estimate_contour", "extract_frame", "feature_as",
    "feature_icpc", "feature_ihpc", "fit_model", "generate_corpus",
    "load_manifest", "log_likelihood", "posterior", "read_contour_csv",
    "read_f0_csv", "read_model", "read_wav", "refine_f0", "save_manifest",
    "score", "smooth", "synthesize", "train_from_manifest", "wrap_phase",
    "write_contour_csv", "write_f0_csv", "write_model", "write_wav",
]
