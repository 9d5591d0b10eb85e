use crate::mesh::{
    clough_tocher_split, worsey_farin_split, Carrier, SimplicialMesh, SplitKind, SplitMap,
};
use crate::Result;

/// The mesh a space actually lives on, with its macro structure when it comes
/// from a split.
#[derive(Clone, Debug)]
pub struct Layout {
    mesh: SimplicialMesh,
    split: Option<SplitMap>,
}

impl Layout {
    pub fn plain(mesh: &SimplicialMesh) -> Self {
        Layout {
            mesh: mesh.clone(),
            split: None,
        }
    }

    pub fn worsey_farin(mesh: &SimplicialMesh) -> Result<Self> {
        let s = worsey_farin_split(mesh)?;
        Ok(Layout {
            mesh: s.child.clone(),
            split: Some(s),
        })
    }

    pub fn clough_tocher(mesh: &SimplicialMesh) -> Result<Self> {
        let s = clough_tocher_split(mesh)?;
        Ok(Layout {
            mesh: s.child.clone(),
            split: Some(s),
        })
    }

    /// Working mesh.
    pub fn mesh(&self) -> &SimplicialMesh {
        &self.mesh
    }

    /// Macro mesh (the working mesh itself when unsplit).
    pub fn parent(&self) -> &SimplicialMesh {
        self.split.as_ref().map_or(&self.mesh, |s| &s.parent)
    }

    pub fn split(&self) -> Option<&SplitMap> {
        self.split.as_ref()
    }

    pub fn is_worsey_farin(&self) -> bool {
        self.split
            .as_ref()
            .is_some_and(|s| s.kind == SplitKind::WorseyFarin)
    }

    /// Macro cell of a working cell.
    pub fn group(&self, c: usize) -> usize {
        self.split.as_ref().map_or(c, |s| s.micro_to_macro[c])
    }

    pub fn num_groups(&self) -> usize {
        self.parent().num_cells()
    }

    /// Macro entity carrying working entity `(k, id)`.
    pub fn carrier(&self, k: usize, id: usize) -> Carrier {
        self.split
            .as_ref()
            .map_or(Carrier { dim: k, id }, |s| s.carrier(k, id))
    }

    pub fn same_as(&self, other: &Layout) -> bool {
        self.mesh.same_cells(&other.mesh)
            && self.mesh.vertices() == other.mesh.vertices()
            && self.split.as_ref().map(|s| s.kind) == other.split.as_ref().map(|s| s.kind)
    }

    /// Same layout on the working mesh scaled to unit diameter.
    pub fn scaled_to_unit_diameter(&self) -> Layout {
        let s = 1.0 / self.mesh.diameter();
        let scale = |m: &SimplicialMesh| m.scaled_by(s);
        Layout {
            mesh: scale(&self.mesh),
            split: self.split.as_ref().map(|sp| {
                let mut sp = sp.clone();
                sp.child = scale(&sp.child);
                sp.parent = scale(&sp.parent);
                sp
            }),
        }
    }
}
