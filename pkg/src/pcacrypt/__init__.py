"""Cellular-automata cryptography toolkit.

Elementary and programmable CA engines, state-transition cycle analysis,
a cycle-based PCA block cipher, a reference AES, and a benchmark harness
with a command-line front end (``pcacrypt``).
"""

from .eca import (
    Boundary,
    Configuration,
    RuleClass,
    RuleTable,
    apply_rule,
    classify_rule,
    evolve_uniform,
    rule_from_number,
    rule_number_from_table,
    step_uniform,
)
from .pca import (
    ControlProgram,
    ControlSignals,
    RULE_SELECTION,
    pca_evolve,
    pca_run_program,
    pca_step,
    select_rule,
)
from .transitions import (
    AffineMap,
    AffineOrder,
    CycleDecomposition,
    NonAffineRuleError,
    NotBijectiveError,
    OrbitPosition,
    TransitionGraph,
    affine_map_of,
    affine_order,
    build_graph,
    cycle_length_of,
    export_csv,
    export_dot,
    find_cycles,
    is_group_ca,
)
from .cipher import (
    CANONICAL_LANE,
    DEFAULT_LAYOUT,
    CipherKey,
    KeyFormatError,
    LaneLayout,
    PcaBlockCipher,
    RoundSchedule,
    decrypt_block,
    encrypt_block,
    key_schedule,
)
from .aes import (
    AesBlockCipher,
    aes_decrypt_block,
    aes_encrypt_block,
    key_expansion,
)
from .streams import (
    CorruptCiphertextError,
    decrypt_stream,
    encrypt_stream,
    make_cipher,
    pad,
    unpad,
)

__version__ = "0.1.0"
