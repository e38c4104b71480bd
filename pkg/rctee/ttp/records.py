from dataclasses import dataclass, field
from threading import Lock

from rctee.crypto import SignKeyPair, SymmetricKey
from rctee.image import MeasurementSet
from rctee.puf import CrpSet


@dataclass
class DeviceRecord:
    """
    Everything the TTP keeps about one enrolled device.

    Parameters
    ----------
    device_id : bytes
        #DI, 16 bytes, unique across records.
    csp_id : bytes
        #CSP of the cloud service provider owning the device.
    board_version : bytes
    bbram_key : SymmetricKey
        Key the bootable image is encrypted with.
    ta_keys : SignKeyPair
        (SK_TA, PK_TA); PK_TA is embedded in the TEE partition.
    crps : CrpSet
    golden : MeasurementSet
        Measurements of the image as built.
    """

    device_id: bytes
    csp_id: bytes
    board_version: bytes
    bbram_key: SymmetricKey
    ta_keys: SignKeyPair
    crps: CrpSet
    golden: MeasurementSet
    lock: Lock = field(default_factory=Lock, repr=False, compare=False)


@dataclass(frozen=True)
class UserRecord:
    uid: bytes
    pk_user: bytes
