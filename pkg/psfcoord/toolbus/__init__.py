from psfcoord.toolbus.application import ToolBusApplication, assemble, run_application, stub_application
from psfcoord.toolbus.constrain import ConstrainedComponent, constrain, tool_stub


__all__ = [
    "ConstrainedComponent",
    "ToolBusApplication",
    "assemble",
    "constrain",
    "run_application",
    "stub_application",
    "tool_stub",
]
