"""The TTP's device and user database and its snapshot file."""

import logging
import os
import tempfile
from threading import Lock
from typing import Dict, Iterator, Optional

from rctee.binary import Reader, Writer
from rctee.crypto import SignKeyPair, SymmetricKey, hash_data, sign_keygen
from rctee.errors import ErrorCode, RcteeError
from rctee.image import MeasurementSet
from rctee.puf import Challenge, CrpSet, Response
from rctee.ttp.records import DeviceRecord, UserRecord

logger = logging.getLogger(__name__)

SNAPSHOT_MAGIC = b"RCTD"
SNAPSHOT_VERSION = 1
UID_SIZE = 16

_UID_LABEL = b"RCTEE-UID-V1"


class TtpDatabase:
    """
    Device and user records plus the TTP signing pair.

    Insertions are serialized by a database lock; CRP consumption is serialized
    per device by the record's own lock.

    Parameters
    ----------
    keys : SignKeyPair, default=None
        (SK_TTP, PK_TTP); a fresh pair when None.
    """

    def __init__(self, keys: Optional[SignKeyPair] = None) -> None:
        self.keys = keys if keys is not None else sign_keygen()
        self._devices: Dict[bytes, DeviceRecord] = {}
        self._users: Dict[bytes, UserRecord] = {}
        self._lock = Lock()
        self._save_lock = Lock()

    # devices ---------------------------------------------------------------

    def add_device(self, record: DeviceRecord) -> None:
        with self._lock:
            if record.device_id in self._devices:
                raise RcteeError(
                    ErrorCode.DUPLICATE_DEVICE,
                    f"device {record.device_id.hex()} already enrolled",
                )
            self._devices[record.device_id] = record

    def has_device(self, device_id: bytes) -> bool:
        return bytes(device_id) in self._devices

    def device(self, device_id: bytes) -> DeviceRecord:
        try:
            return self._devices[bytes(device_id)]
        except KeyError:
            raise RcteeError(
                ErrorCode.UNKNOWN_DEVICE,
                f"device {bytes(device_id).hex()} not enrolled",
            ) from None

    def devices(self) -> Iterator[DeviceRecord]:
        return iter(list(self._devices.values()))

    # users -----------------------------------------------------------------

    def add_user(self, record: UserRecord) -> None:
        with self._lock:
            self._users[record.uid] = record

    def register_user(self, pk_user: bytes) -> UserRecord:
        """Stores a new user under a fresh #UID."""
        with self._lock:
            serial = len(self._users).to_bytes(8, "big")
            uid = hash_data(_UID_LABEL + bytes(pk_user) + serial)[:UID_SIZE]
            while uid in self._users:
                uid = hash_data(_UID_LABEL + uid)[:UID_SIZE]
            record = UserRecord(uid, bytes(pk_user))
            self._users[uid] = record
        return record

    def user(self, uid: bytes) -> UserRecord:
        try:
            return self._users[bytes(uid)]
        except KeyError:
            raise RcteeError(ErrorCode.UNKNOWN_USER, "user not enrolled") from None

    def users(self) -> Iterator[UserRecord]:
        return iter(list(self._users.values()))

    def __len__(self) -> int:
        return len(self._devices)

    # snapshot --------------------------------------------------------------

    def to_bytes(self) -> bytes:
        writer = Writer().raw(SNAPSHOT_MAGIC).u16(SNAPSHOT_VERSION)
        writer.short_bytes(self.keys.secret)

        with self._lock:
            devices = list(self._devices.values())
            users = list(self._users.values())

        writer.u64(len(devices))
        for record in devices:
            with record.lock:
                writer.short_bytes(record.device_id)
                writer.short_bytes(record.csp_id)
                writer.short_bytes(record.board_version)
                writer.short_bytes(record.bbram_key.key)
                writer.short_bytes(record.ta_keys.secret)
                writer.short_bytes(record.golden.h_boot())
                entries = record.crps.entries()
                writer.u64(len(entries))
                for challenge, response, consumed in entries:
                    writer.short_bytes(challenge.to_bytes())
                    writer.short_bytes(response.to_bytes())
                    writer.u8(1 if consumed else 0)

        writer.u64(len(users))
        for user in users:
            writer.short_bytes(user.uid).short_bytes(user.pk_user)
        return writer.getvalue()

    @classmethod
    def from_bytes(cls, data: bytes) -> "TtpDatabase":
        reader = Reader(data)
        if reader.take(len(SNAPSHOT_MAGIC)) != SNAPSHOT_MAGIC:
            raise RcteeError(ErrorCode.MALFORMED, "not a TTP snapshot")
        version = reader.u16()
        if version != SNAPSHOT_VERSION:
            raise RcteeError(
                ErrorCode.MALFORMED, f"unsupported snapshot version {version}"
            )
        database = cls(sign_keygen(reader.short_bytes()))

        for _ in range(reader.u64()):
            device_id = reader.short_bytes()
            csp_id = reader.short_bytes()
            board_version = reader.short_bytes()
            bbram_key = SymmetricKey(reader.short_bytes(), b"bbram")
            ta_keys = sign_keygen(reader.short_bytes())
            golden = MeasurementSet.from_h_boot(reader.short_bytes())
            crps = []
            for _ in range(reader.u64()):
                challenge = Challenge.from_bytes(reader.short_bytes())
                response = Response.from_bytes(reader.short_bytes())
                crps.append((challenge, response, reader.u8() == 1))
            database.add_device(
                DeviceRecord(
                    device_id,
                    csp_id,
                    board_version,
                    bbram_key,
                    ta_keys,
                    CrpSet(crps),
                    golden,
                )
            )

        for _ in range(reader.u64()):
            database.add_user(UserRecord(reader.short_bytes(), reader.short_bytes()))
        reader.finish()
        return database

    def save(self, path: str) -> None:
        """
        Writes the snapshot to a temporary file next to ``path`` and renames it
        over ``path``. Concurrent saves are applied one at a time.
        """
        directory = os.path.dirname(os.path.abspath(path))
        with self._save_lock:
            handle = tempfile.NamedTemporaryFile(
                dir=directory,
                prefix=f"{os.path.basename(path)}.",
                suffix=".tmp",
                delete=False,
            )
            try:
                with handle:
                    handle.write(self.to_bytes())
                    handle.flush()
                    os.fsync(handle.fileno())
                os.replace(handle.name, path)
            except BaseException:
                if os.path.exists(handle.name):
                    os.unlink(handle.name)
                raise
        logger.info("TTP database saved to %s (%d devices)", path, len(self))

    @classmethod
    def load(cls, path: str) -> "TtpDatabase":
        with open(path, "rb") as handle:
            database = cls.from_bytes(handle.read())
        logger.info("TTP database loaded from %s (%d devices)", path, len(database))
        return database
