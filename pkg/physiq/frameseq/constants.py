CONDITIONING_SECONDS = 3.0
TEST_SECONDS = 5.0

META_FILE = "meta.json"
FRAME_PATTERN = "frame_{index:06d}.png"
FRAME_GLOB = "frame_*.png"

RAW_MAGIC = b"PIQF"
RAW_SUFFIX = ".piqf"
# Sidecar of a raw file: clip.piqf -> clip.meta.json
RAW_META_SUFFIX = ".meta.json"
# magic, width, height, frame count (little-endian u32)
RAW_HEADER = "<4sIII"
