from src.shift.classes import (
    ClassElement,
    ClassesGroup,
    class_of,
    classes_group,
    relative_classes_group,
    smith_normal_form,
)
from src.shift.clopen import ClopenSet, Code, common_refinement
from src.shift.graph import (
    DirectedGraph,
    SubshiftReport,
    check_subshift,
    core_nodes,
    irreducible,
    irreducible_core,
)
from src.shift.paths import NULL, Path, children, gcp, make_path

__all__ = [
    "ClassElement",
    "ClassesGroup",
    "ClopenSet",
    "Code",
    "DirectedGraph",
    "NULL",
    "Path",
    "SubshiftReport",
    "check_subshift",
    "children",
    "class_of",
    "classes_group",
    "common_refinement",
    "core_nodes",
    "gcp",
    "irreducible",
    "irreducible_core",
    "make_path",
    "relative_classes_group",
    "smith_normal_form",
]
