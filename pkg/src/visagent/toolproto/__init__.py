from .client import RemoteTool, client_render, describe_tool
from .conformance import ConformanceReport, check_conformance
from .descriptor import PROTOCOL_VERSION, ToolDescriptor
from .server import ServerHandle, serve_tool
from .tools import MockDrTool, ScatterTool, VolumeTool

__all__ = [
    "ConformanceReport",
    "MockDrTool",
    "PROTOCOL_VERSION",
    "RemoteTool",
    "ScatterTool",
    "ServerHandle",
    "ToolDescriptor",
    "VolumeTool",
    "check_conformance",
    "client_render",
    "describe_tool",
    "serve_tool",
]
