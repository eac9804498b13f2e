from .scene import PhantomScene, Target, load_scene
from .session import TeleopConfig, TeleopEvent, TeleopSession

__all__ = [
    "PhantomScene",
    "Target",
    "load_scene",
    "TeleopConfig",
    "TeleopEvent",
    "TeleopSession",
]
