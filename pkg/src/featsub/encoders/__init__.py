"""Translations of a subscription into MaxSAT, pseudo-Boolean, MIP and WCSP models."""
from .cnf import (HARD, WeightedClauseSet, bit_width, decode_relaxation, encode_atom,
                  encode_binary_value, encode_symbol_binary, encode_symbol_unary,
                  encode_unary_value, optimum_cost, satisfiable, unit_propagate)
from .formats import (FORMATS, FormatError, read_lp, read_opb, read_wcnf, read_wcsp,
                      write_model)
from .mip import MipModel, check_point, encode_mip, feasible_positions, mip_optimum
from .pb import PbModel, objective_value, pb_optimum, to_pseudo_boolean
from .wcsp import WcspModel, assignment_cost, encode_wcsp, wcsp_optimum
