from psfcoord.refine.mapping import MappingRule, MappingTable, load_mapping, load_mapping_file
from psfcoord.refine.refine import NAMING, Instantiation, NamingConvention, audit_report, refine_process, refine_system
from psfcoord.refine.vertical import VerticalVerdict, check_vertical


__all__ = [
    "NAMING",
    "Instantiation",
    "MappingRule",
    "MappingTable",
    "NamingConvention",
    "VerticalVerdict",
    "audit_report",
    "check_vertical",
    "load_mapping",
    "load_mapping_file",
    "refine_process",
    "refine_system",
]
