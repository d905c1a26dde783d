"""Finite automata as circuits: classification, synthesis and delay measurement."""

from .automaton import (Automaton, Transducer, builtin, run, output_trace, run_transducer,
                        load_machine, save_machine, CATALOG_NAMES)
from .errors import (FsaLabError, ParseError, ContractError, InputValidationError,
                     UnsupportedSemanticsError, PipelineContractError, GuardrailError)

__version__ = "0.1.0"
