"""capitulab: exact class-field-theoretic calculus with service and CLI.

Library surface: integer kernel (arith), finite abelian groups
(abgroup), p-adic characters (galchar), ambiguous-class formulas
(chevalley), capitulation transcripts (captrace), quadratic form class
groups (quadf), cyclic cubic fields (cubf), cyclotomic units (cyclo).
The FastAPI app lives in capitulab.service, the thin-client CLI in
capitulab.cli.
"""

__version__ = "0.1.0"

from .abgroup import FinAbGroup, Subgroup, subgroup_from_rows
from .captrace import CapitulationVerdict, TowerRecord, analyze, parse_transcripts
from .chevalley import ChevalleyInput, FiltrationLedger, StabilityVerdict, ambiguous_number
from .cubf import CyclicCubicField, defining_polynomial, defining_polynomials
from .cyclo import CycElem, CycNumber, GroupRingExp, eta, verify_norm_relation
from .galchar import GaloisModule, PadicCharacter, decompose, enumerate_phi
from .quadf import FundUnit, QuadClassGroup, QuadForm, class_group

__all__ = [
    "__version__",
    "FinAbGroup", "Subgroup", "subgroup_from_rows",
    "CapitulationVerdict", "TowerRecord", "analyze", "parse_transcripts",
    "ChevalleyInput", "FiltrationLedger", "StabilityVerdict", "ambiguous_number",
    "CyclicCubicField", "defining_polynomial", "defining_polynomials",
    "CycElem", "CycNumber", "GroupRingExp", "eta", "verify_norm_relation",
    "GaloisModule", "PadicCharacter", "decompose", "enumerate_phi",
    "FundUnit", "QuadClassGroup", "QuadForm", "class_group",
]
