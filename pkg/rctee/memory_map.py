"""Physical address map of the simulated FPGA-SoC."""

# reserved secure DDR for IP input/output, reachable only with Secure prot
SECURE_BASE = 0x7000_0000
SECURE_END = 0x7010_0000

# non-secure DDR, including the buffer shared between REE and TEE
DDR_BASE = 0x0000_0000
DDR_END = SECURE_BASE
SHARED_BASE = 0x6000_0000
SHARED_SIZE = 64 * 1024 * 1024

OCM_BASE = 0xFFFC_0000
OCM_SIZE = 256 * 1024
OCM_CHUNK = 4 * 1024
# boot measurements are staged in the last OCM chunk
OCM_MEASUREMENT_SLOT = OCM_BASE + OCM_SIZE - OCM_CHUNK

# default IP address ranges handed out by the manifest tooling
SECURE_IP_BASE = SECURE_BASE + 0x1000
NON_SECURE_IP_BASE = 0x4000_0000
# address space given to one IP: its status word, then its records
IP_BLOCK_SIZE = 0x4000

# register map of the RO-PUF IP in the initial hardware design
PUF_STATUS_ADDRESS = SECURE_BASE
PUF_CHALLENGE_ADDRESS = SECURE_BASE + 0x8
PUF_RESPONSE_ADDRESS = SECURE_BASE + 0x200


def in_secure_region(address: int, length: int = 1) -> bool:
    return SECURE_BASE <= address and address + max(length, 1) <= SECURE_END
