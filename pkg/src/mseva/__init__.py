"""mseva: multimodal short-video emotion analysis pipeline and service."""

__version__ = "0.1.0"
