"""Atom structures over graphs, their complex algebras, and checks of their laws."""

from .algebra import (ComplexAlgebra, Element, Frame, atom_frame, compare_frames,
                      complex_algebra, dimension_set, generated_subalgebra, is_simple_witness,
                      structure_frame, ultrafilter_frame)
from .atoms import (Atom, AtomStructure, CopyRule, Signature, apply_bijection, atom_count,
                    build_eta, diag_membership, equiv_cyl, equiv_swap, format_dump, is_atom,
                    parse_dump, read_dump, reduct, write_dump)
from .errors import FormatError, InvalidParameter, ResourceLimit
from .graph import (Graph, build_standard, chromatic_number, disjoint_union, format_graph, girth,
                    mycielskian, parse_graph, petersen, random_graph, read_graph, search_witness,
                    write_graph)
from .terms import (Equation, Strategy, check_equation, eval_term, format_term, load_suite,
                    parse_equation, parse_term)
from .verify import (CheckReport, check_axiom_suite, check_lemma_suite, check_structural,
                     full_report, report_for_structure)

__version__ = "0.1.0"
