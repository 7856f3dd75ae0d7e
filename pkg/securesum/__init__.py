from securesum.version import VERSION, VERSION_SHORT
