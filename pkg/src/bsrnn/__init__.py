"""Band-split RNN source separation: engine, data pipelines, service, CLI.

The library splits a complex spectrogram into frequency subbands, models
them with interleaved time- and band-direction BLSTMs, and estimates a
complex mask per subband. Around that core sit the training-data pipelines
(salient-segment detection, mixture simulation, self-training sampling),
the evaluation metrics, a chunked full-song inference path, an HTTP
service, and a thin command-line client.
"""

from .audio import AudioTrack, ComplexSpectrogram, ReconstructionError, istft, stft
from .bands import (
    BandLedger,
    BandScheme,
    DegenerateBandError,
    builtin_scheme,
    compile_scheme,
    merge,
    split,
)
from .inference import InferenceConfig, separate_track
from .model import ModelConfig, ModelWeights, init_weights, param_count
from .weights_io import WeightFormatError, load_weights, save_weights

__version__ = "0.1.0"

__all__ = [
    "AudioTrack",
    "ComplexSpectrogram",
    "ReconstructionError",
    "stft",
    "istft",
    "BandLedger",
    "BandScheme",
    "DegenerateBandError",
    "builtin_scheme",
    "compile_scheme",
    "split",
    "merge",
    "InferenceConfig",
    "separate_track",
    "ModelConfig",
    "ModelWeights",
    "init_weights",
    "param_count",
    "WeightFormatError",
    "load_weights",
    "save_weights",
    "__version__",
]
