from .catalog import (
    FREQUENCY_FEATURES,
    POINCARE_DESCRIPTORS,
    SUBBANDS,
    TIME_FEATURES,
    FeatureId,
    catalog,
    catalog_names,
    feature_index,
)
from .extract import (
    FeatureConfig,
    FeatureMatrix,
    export_features_csv,
    extract_features,
    load_feature_matrices,
    save_feature_matrices,
)
from .freqdomain import (
    DEFAULT_BANDS,
    BandDef,
    Spectrum,
    band_powers,
    frequency_features,
    magnitude_spectrum,
    spectral_descriptors,
)
from .graphical import (
    PoincareDescriptors,
    graphical_features,
    poincare_descriptors,
    poincare_embed,
)
from .timedomain import (
    TimeFeatureSet,
    hjorth,
    hurst_rs,
    moments,
    permutation_entropy,
    rms_ssc,
    sample_entropy,
    shannon_entropy,
    time_features,
)

__all__ = [
    "BandDef",
    "DEFAULT_BANDS",
    "FREQUENCY_FEATURES",
    "FeatureConfig",
    "FeatureId",
    "FeatureMatrix",
    "POINCARE_DESCRIPTORS",
    "PoincareDescriptors",
    "SUBBANDS",
    "Spectrum",
    "TIME_FEATURES",
    "TimeFeatureSet",
    "band_powers",
    "catalog",
    "catalog_names",
    "export_features_csv",
    "extract_features",
    "feature_index",
    "frequency_features",
    "graphical_features",
    "hjorth",
    "hurst_rs",
    "load_feature_matrices",
    "magnitude_spectrum",
    "moments",
    "permutation_entropy",
    "poincare_descriptors",
    "poincare_embed",
    "rms_ssc",
    "sample_entropy",
    "save_feature_matrices",
    "shannon_entropy",
    "spectral_descriptors",
    "time_features",
]
