"""Command-line tools: rctee-image, rctee-ttp, rctee-device, rctee-client and
rctee-harness."""
