use serde::{Deserialize, Serialize};

use crate::ingest::{parse_identity, Identity, PepRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuthorRole {
    Bdfl,
    BdflDelegate,
    PepAuthor,
    PepEditor,
    CoreDeveloper,
    Other,
}

impl AuthorRole {
    pub fn as_str(self) -> &'static str {
        match self {
            AuthorRole::Bdfl => "bdfl",
            AuthorRole::BdflDelegate => "bdfl_delegate",
            AuthorRole::PepAuthor => "pep_author",
            AuthorRole::PepEditor => "pep_editor",
            AuthorRole::CoreDeveloper => "core_developer",
            AuthorRole::Other => "other",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamcerClass {
    AuthorRequest,
    BdflReview,
    BdflPronouncement,
    MemberReflection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RoleScores {
    pub bdfl: f64,
    pub bdfl_delegate: f64,
    pub pep_author: f64,
    pub pep_editor: f64,
    pub core_developer: f64,
    pub other: f64,
}

impl Default for RoleScores {
    fn default() -> Self {
        RoleScores { bdfl: 0.9, bdfl_delegate: 0.9, pep_author: 0.6, pep_editor: 0.5, core_developer: 0.4, other: 0.0 }
    }
}

impl RoleScores {
    pub fn score(&self, role: AuthorRole) -> f64 {
        match role {
            AuthorRole::Bdfl => self.bdfl,
            AuthorRole::BdflDelegate => self.bdfl_delegate,
            AuthorRole::PepAuthor => self.pep_author,
            AuthorRole::PepEditor => self.pep_editor,
            AuthorRole::CoreDeveloper => self.core_developer,
            AuthorRole::Other => self.other,
        }
    }

    pub fn values(&self) -> [f64; 6] {
        [self.bdfl, self.bdfl_delegate, self.pep_author, self.pep_editor, self.core_developer, self.other]
    }
}

/// Project-wide people: the leader, proposal editors and core developers.
/// Per-proposal authors and delegates come from the proposal record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RoleDirectory {
    pub bdfl: Vec<String>,
    pub pep_editors: Vec<String>,
    pub core_developers: Vec<String>,
}

impl Default for RoleDirectory {
    fn default() -> Self {
        RoleDirectory {
            bdfl: vec!["Guido van Rossum <guido@python.org>".into()],
            pep_editors: Vec::new(),
            core_developers: Vec::new(),
        }
    }
}

fn any_matches(list: &[Identity], name: &str, email: &str) -> bool {
    list.iter().any(|i| i.matches(name, email))
}

/// Directory with identities parsed once.
#[derive(Debug, Clone)]
pub(crate) struct ResolvedDirectory {
    bdfl: Vec<Identity>,
    editors: Vec<Identity>,
    core: Vec<Identity>,
}

impl RoleDirectory {
    pub fn from_json(json: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(json)
    }

    pub(crate) fn resolve(&self) -> ResolvedDirectory {
        let parse = |v: &[String]| v.iter().map(|s| parse_identity(s)).collect();
        ResolvedDirectory { bdfl: parse(&self.bdfl), editors: parse(&self.pep_editors), core: parse(&self.core_developers) }
    }

    /// The author's role in the discussion of `pep`.
    pub fn role_of(&self, name: &str, email: &str, pep: Option<&PepRecord>) -> AuthorRole {
        self.resolve().role_of(name, email, pep)
    }
}

impl ResolvedDirectory {
    /// Checked from the highest-scoring role down.
    pub(crate) fn role_of(&self, name: &str, email: &str, pep: Option<&PepRecord>) -> AuthorRole {
        if any_matches(&self.bdfl, name, email) {
            return AuthorRole::Bdfl;
        }
        if let Some(pep) = pep {
            if pep.bdfl_delegate.as_ref().is_some_and(|d| d.matches(name, email)) {
                return AuthorRole::BdflDelegate;
            }
            if any_matches(&pep.authors, name, email) {
                return AuthorRole::PepAuthor;
            }
        }
        if any_matches(&self.editors, name, email) {
            return AuthorRole::PepEditor;
        }
        if any_matches(&self.core, name, email) {
            return AuthorRole::CoreDeveloper;
        }
        AuthorRole::Other
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::StateName;

    fn pep() -> PepRecord {
        PepRecord {
            number: 308,
            title: "Conditional Expressions".into(),
            authors: vec![parse_identity("Raymond Hettinger <python@rcn.com>")],
            bdfl_delegate: Some(parse_identity("Nick Coghlan <ncoghlan@gmail.com>")),
            final_state: StateName::unknown(),
            transitions: vec![],
        }
    }

    #[test]
    fn role_scores_match_stated_values() {
        let s = RoleScores::default();
        assert_eq!(s.score(AuthorRole::Bdfl), 0.9);
        assert_eq!(s.score(AuthorRole::BdflDelegate), 0.9);
        assert_eq!(s.score(AuthorRole::PepAuthor), 0.6);
        assert_eq!(s.score(AuthorRole::PepEditor), 0.5);
        assert_eq!(s.score(AuthorRole::CoreDeveloper), 0.4);
        assert_eq!(s.score(AuthorRole::Other), 0.0);
    }

    #[test]
    fn resolution() {
        let dir = RoleDirectory {
            core_developers: vec!["Tim Peters <tim@python.org>".into()],
            pep_editors: vec!["Barry Warsaw <barry@python.org>".into()],
            ..RoleDirectory::default()
        };
        let p = pep();
        assert_eq!(dir.role_of("Guido van Rossum", "guido@python.org", Some(&p)), AuthorRole::Bdfl);
        assert_eq!(dir.role_of("N. Coghlan", "NCOGHLAN@gmail.com", Some(&p)), AuthorRole::BdflDelegate);
        assert_eq!(dir.role_of("Raymond Hettinger", "", Some(&p)), AuthorRole::PepAuthor);
        assert_eq!(dir.role_of("Raymond Hettinger", "", None), AuthorRole::Other);
        assert_eq!(dir.role_of("Barry", "barry@python.org", Some(&p)), AuthorRole::PepEditor);
        assert_eq!(dir.role_of("Tim Peters", "tim@elsewhere.org", Some(&p)), AuthorRole::CoreDeveloper);
        assert_eq!(dir.role_of("Someone", "x@y.z", Some(&p)), AuthorRole::Other);
    }

    #[test]
    fn directory_json() {
        let d = RoleDirectory::from_json(r#"{"core_developers": ["A <a@x>"]}"#).unwrap();
        assert_eq!(d.bdfl.len(), 1);
        assert!(RoleDirectory::from_json(r#"{"nope": []}"#).is_err());
    }
}
