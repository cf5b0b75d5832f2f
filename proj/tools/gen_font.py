#!/usr/bin/env python3
"""Regenerate src/font_data.cpp: an 8x12 one-bit bitmap of printable ASCII.

Glyphs are rasterized from DejaVu Sans Mono and thresholded, so the table is
fully deterministic once generated. The output is checked in; this script is
only needed to change the glyph set or size.
"""
import sys
from PIL import Image, ImageDraw, ImageFont

W, H = 8, 12
FONT = "/usr/share/fonts/truetype/dejavu/DejaVuSansMono.ttf"


def main(out_path):
    font = ImageFont.truetype(FONT, 11)
    rows = []
    for code in range(0x20, 0x7F):
        img = Image.new("L", (W, H), 0)
        d = ImageDraw.Draw(img)
        d.text((0, -1), chr(code), fill=255, font=font)
        bits = []
        for y in range(H):
            byte = 0
            for x in range(W):
                if img.getpixel((x, y)) >= 110:
                    byte |= 0x80 >> x
            bits.append(byte)
        rows.append((code, bits))
    with open(out_path, "w") as f:
        f.write("// Generated by tools/gen_font.py from DejaVu Sans Mono. Do not edit.\n")
        f.write("#include \"ncforge/raster.hpp\"\n\nnamespace ncf::detail {\n\n")
        f.write("// Printable ASCII 0x20..0x7E, %d rows per glyph, MSB = leftmost pixel.\n" % H)
        f.write("const std::uint8_t kAsciiFont[95][%d] = {\n" % H)
        for code, bits in rows:
            label = chr(code) if chr(code) not in "\\" else "backslash"
            f.write("    {%s},  // %s\n" % (", ".join("0x%02x" % b for b in bits), label))
        f.write("};\n\n}  // namespace ncf::detail\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/font_data.cpp")
