"""Vector Stream Cipher family (VSC128, VSC 2.0, VSC 2.1).

Keystream cipher library with a generic permutation-polynomial engine over
(Z/2^n Z)^m, exhaustive bijectivity oracles, and an analysis harness for
avalanche, randomness and throughput experiments.

The VSC family is a research cipher; do not use it to protect real data.
"""

from .core import (
    MASK32,
    PREPROCESS_CONSTANTS,
    CipherState,
    InitVector,
    KeyMaterial,
    KeyRule,
    KeystreamBlock,
    MaskRule,
    OddDStateError,
    RotationRule,
    StreamCipher,
    UnsupportedVariantError,
    VariantConfig,
    VSC128,
    VSC20,
    VSC21,
    VARIANTS,
    VscError,
    apply_round,
    get_variant,
    init_state,
    keystream,
    keystream_blocks,
    load_key,
    mask_affine_4x_plus_1,
    mask_clear2_set1,
    multiplication_layer,
    next_block,
    preprocess,
    rotate256_left5,
    rotate256_left5_d_twist,
    xor_crypt,
)
from .permpoly import (
    BijectivityReport,
    GenericVectorMap,
    MapRule,
    apply_map,
    bijectivity_check,
    scaled_round,
)

__version__ = "1.0.0"

__all__ = [
    "MASK32",
    "PREPROCESS_CONSTANTS",
    "CipherState",
    "InitVector",
    "KeyMaterial",
    "KeyRule",
    "KeystreamBlock",
    "MaskRule",
    "OddDStateError",
    "RotationRule",
    "StreamCipher",
    "UnsupportedVariantError",
    "VariantConfig",
    "VSC128",
    "VSC20",
    "VSC21",
    "VARIANTS",
    "VscError",
    "apply_round",
    "get_variant",
    "init_state",
    "keystream",
    "keystream_blocks",
    "load_key",
    "mask_affine_4x_plus_1",
    "mask_clear2_set1",
    "multiplication_layer",
    "next_block",
    "preprocess",
    "rotate256_left5",
    "rotate256_left5_d_twist",
    "xor_crypt",
    "BijectivityReport",
    "GenericVectorMap",
    "MapRule",
    "apply_map",
    "bijectivity_check",
    "scaled_round",
]
