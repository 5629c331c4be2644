# CogRadar - revealed-preference detection of cognitive radars
__version__ = "0.3.0"
