"""senselab: a classroom sensor platform with simulated plug-and-play devices.

Subpackages:
    protocol   wire framing, CRC, calibration, host session
    devices    virtual sensor devices and class-kit farms
    core       inquiry workflow domain model and rules
    scoring    rubric engine for inquiry quality categories
    analytics  event log and engagement report computation
    service    HTTP API, persistence, device gateway
    fixtures   bundled evaluation corpus and its generator
"""

__version__ = "0.1.0"
