use super::{Attribute, AttributeSchema};

/// The 41 connection-record attributes in file order, flagged nominal where
/// the official names file declares them symbolic.
pub const KDD99_ATTRIBUTES: [(&str, bool); 41] = [
    ("duration", false),
    ("protocol_type", true),
    ("service", true),
    ("flag", true),
    ("src_bytes", false),
    ("dst_bytes", false),
    ("land", true),
    ("wrong_fragment", false),
    ("urgent", false),
    ("hot", false),
    ("num_failed_logins", false),
    ("logged_in", true),
    ("num_compromised", false),
    ("root_shell", false),
    ("su_attempted", false),
    ("num_root", false),
    ("num_file_creations", false),
    ("num_shells", false),
    ("num_access_files", false),
    ("num_outbound_cmds", false),
    ("is_host_login", true),
    ("is_guest_login", true),
    ("count", false),
    ("srv_count", false),
    ("serror_rate", false),
    ("srv_serror_rate", false),
    ("rerror_rate", false),
    ("srv_rerror_rate", false),
    ("same_srv_rate", false),
    ("diff_srv_rate", false),
    ("srv_diff_host_rate", false),
    ("dst_host_count", false),
    ("dst_host_srv_count", false),
    ("dst_host_same_srv_rate", false),
    ("dst_host_diff_srv_rate", false),
    ("dst_host_same_src_port_rate", false),
    ("dst_host_srv_diff_host_rate", false),
    ("dst_host_serror_rate", false),
    ("dst_host_srv_serror_rate", false),
    ("dst_host_rerror_rate", false),
    ("dst_host_srv_rerror_rate", false),
];

/// Raw KDD99-family schema with empty (open) nominal domains and no class
/// labels yet.
pub fn kdd99_schema() -> AttributeSchema {
    let attributes = KDD99_ATTRIBUTES
        .iter()
        .map(|&(name, nominal)| {
            if nominal {
                Attribute::nominal::<&str>(name, [])
            } else {
                Attribute::numeric(name)
            }
        })
        .collect();
    AttributeSchema::new(attributes, Vec::new()).expect("static schema is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn raw_schema_has_41_unique_attributes() {
        let s = kdd99_schema();
        assert_eq!(s.len(), 41);
        assert_eq!(s.attribute(0).name, "duration");
        assert_eq!(s.attribute(40).name, "dst_host_srv_rerror_rate");
        assert_eq!((0..41).filter(|&i| s.is_nominal(i)).count(), 7);
    }
}
