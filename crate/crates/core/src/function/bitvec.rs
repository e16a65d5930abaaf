use std::fmt;

use smallvec::SmallVec;

/// Fixed-width bit vector, bit 0 is the least significant.
///
/// The width is always explicit: `0b101` at width 3 and at width 5 are
/// different values. Bits above `width` are kept at zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    width: usize,
    words: SmallVec<[u64; 2]>,
}

fn words_for(width: usize) -> usize {
    width.div_ceil(64)
}

/// Number of bits needed to write `value` in binary (0 for 0).
pub fn bit_length(value: u64) -> usize {
    (64 - value.leading_zeros()) as usize
}

/// Smallest `w` with `2^w >= count`; `ceil_log2(1) == 0`.
pub fn ceil_log2(count: u64) -> usize {
    if count <= 1 {
        0
    } else {
        bit_length(count - 1)
    }
}

/// Mask with the low `width` bits set. `width` may be 64.
pub fn low_mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

impl BitVec {
    pub fn zeros(width: usize) -> Self {
        BitVec {
            width,
            words: SmallVec::from_elem(0, words_for(width)),
        }
    }

    /// Encodes `value` in `width` bits. Panics if the value does not fit.
    pub fn from_u64(value: u64, width: usize) -> Self {
        assert!(
            width >= 64 || value >> width == 0,
            "value {value} does not fit in {width} bits"
        );
        let mut v = BitVec::zeros(width);
        if width > 0 {
            v.words[0] = value;
        }
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Concatenates `values`, each `arg_width` bits wide; `values[0]` lands in
    /// the lowest bits.
    pub fn pack(values: &[u64], arg_width: usize) -> Self {
        let mut v = BitVec::zeros(values.len() * arg_width);
        for (k, &value) in values.iter().enumerate() {
            debug_assert!(arg_width >= 64 || value >> arg_width == 0);
            v.write_u64(k * arg_width, arg_width, value);
        }
        v
    }

    /// Inverse of [`BitVec::pack`].
    pub fn unpack(&self, arg_width: usize) -> Vec<u64> {
        if arg_width == 0 {
            return Vec::new();
        }
        assert_eq!(
            self.width % arg_width,
            0,
            "width not a multiple of {arg_width}"
        );
        (0..self.width / arg_width)
            .map(|k| self.read_u64(k * arg_width, arg_width))
            .collect()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.width,
            "bit {i} out of range for width {}",
            self.width
        );
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(
            i < self.width,
            "bit {i} out of range for width {}",
            self.width
        );
        let mask = 1u64 << (i % 64);
        if bit {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    /// Reads `len <= 64` bits starting at `start`.
    pub fn read_u64(&self, start: usize, len: usize) -> u64 {
        assert!(len <= 64 && start + len <= self.width);
        if len == 0 {
            return 0;
        }
        let word = start / 64;
        let shift = start % 64;
        let mut out = self.words[word] >> shift;
        if shift != 0 && shift + len > 64 {
            out |= self.words[word + 1] << (64 - shift);
        }
        out & low_mask(len)
    }

    /// Writes the low `len <= 64` bits of `value` starting at `start`.
    pub fn write_u64(&mut self, start: usize, len: usize, value: u64) {
        assert!(len <= 64 && start + len <= self.width);
        let value = value & low_mask(len);
        for i in 0..len {
            self.set(start + i, (value >> i) & 1 == 1);
        }
    }

    /// Integer value, if the width is at most 64.
    pub fn to_u64(&self) -> Option<u64> {
        if self.width > 64 {
            return None;
        }
        Some(self.words.first().copied().unwrap_or(0))
    }

    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        assert!(start + len <= self.width);
        let mut out = BitVec::zeros(len);
        for i in 0..len {
            out.set(i, self.get(start + i));
        }
        out
    }

    pub fn concat(parts: &[BitVec]) -> BitVec {
        let width = parts.iter().map(BitVec::width).sum();
        let mut out = BitVec::zeros(width);
        let mut at = 0;
        for p in parts {
            for i in 0..p.width {
                out.set(at + i, p.get(i));
            }
            at += p.width;
        }
        out
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.width).map(move |i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec[{}]0b", self.width)?;
        if self.width == 0 {
            return write!(f, "-");
        }
        for i in (0..self.width).rev() {
            write!(f, "{}", self.get(i) as u8)?;
        }
        Ok(())
    }
}
